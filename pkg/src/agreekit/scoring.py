"""Probability-weighted scores from autorater token log probabilities.

The rating is the probability-weighted mean of the candidate scores,
r = sum_i (p_i / sum_j p_j) * s_i with p_i = exp(logprob_i). Weights are
normalized after subtracting the maximum log probability, which is identical
in exact arithmetic and avoids underflow for realistic logprobs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import (
    EmptyDistributionError,
    NonFiniteProbabilityError,
    NoValidScoreTokenError,
)
from .model import ScaleKind, ScoreScale

_INTEGER_TOKEN = re.compile(r"[+-]?\d+\Z")


@dataclass(frozen=True)
class ScoreDistribution:
    """Log-probability mass over candidate integer scores at the answer position.

    Logprobs need not be normalized (providers may return unnormalized values);
    normalization cancels inside ``weighted_score``.
    """

    entries: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        # canonical form: score-ascending, so equal distributions compare equal
        normalized = tuple(sorted((int(s), float(lp)) for s, lp in self.entries))
        object.__setattr__(self, "entries", normalized)
        scores = [s for s, _ in self.entries]
        if len(set(scores)) != len(scores):
            raise ValueError(f"duplicate scores in distribution: {sorted(scores)}")

    def validate(self, scale: ScoreScale) -> None:
        if not self.entries:
            raise EmptyDistributionError("score distribution has no entries")
        for score, logprob in self.entries:
            if not math.isfinite(logprob):
                raise NonFiniteProbabilityError(
                    f"logprob for score {score} is not finite: {logprob}"
                )
            if not scale.contains(score):
                raise ValueError(
                    f"score {score} outside scale {scale.min_score}..{scale.max_score}"
                )


def weighted_score(dist: ScoreDistribution, scale: ScoreScale) -> float:
    """Probability-weighted rating in [min_score, max_score].

    Invariant under adding any finite constant to all logprobs.
    """
    dist.validate(scale)
    top = max(lp for _, lp in dist.entries)
    total = 0.0
    acc = 0.0
    for score, logprob in dist.entries:
        w = math.exp(logprob - top)
        total += w
        acc += w * score
    # total >= 1 because the max entry has weight exactly 1
    return acc / total


def parse_answer_tokens(
    token_logprobs: list[tuple[str, float]], scale: ScoreScale
) -> ScoreDistribution:
    """Filter provider answer-token logprobs down to in-scale score mass.

    Integer scales keep tokens that parse (after stripping whitespace) to an
    integer within the scale; binary scales keep case-insensitive "yes"/"no"
    as 1/0. Duplicate scores are merged with log-sum-exp; everything else is
    dropped, and renormalization happens inside ``weighted_score``.
    """
    masses: dict[int, float] = {}
    for token, logprob in token_logprobs:
        text = token.strip()
        if scale.kind is ScaleKind.BINARY_YES_NO:
            lowered = text.lower()
            if lowered == "yes":
                score = 1
            elif lowered == "no":
                score = 0
            else:
                continue
        else:
            if not _INTEGER_TOKEN.fullmatch(text):
                continue
            score = int(text)
            if not scale.contains(score):
                continue
        if score in masses:
            masses[score] = _logaddexp(masses[score], float(logprob))
        else:
            masses[score] = float(logprob)
    if not masses:
        raise NoValidScoreTokenError(
            f"no token parsed to a score on scale {scale.min_score}..{scale.max_score}"
        )
    return ScoreDistribution(tuple(sorted(masses.items())))


def _logaddexp(a: float, b: float) -> float:
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))
