"""Autorater backends behind one small interface.

A Provider turns a prompt into answer-token logprobs. The bundled
ReplayProvider serves recorded responses from a directory store keyed by
the prompt's SHA-256 hash, which makes runs reproducible offline. Live
adapters plug in by implementing ``send``.
"""

from __future__ import annotations

import abc
import dataclasses
import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from .errors import AgreekitError, ProviderFailureError, ReplayMissError


@dataclasses.dataclass(frozen=True)
class ProviderRequest:
    prompt: str
    top_logprobs: int = 5

    def __post_init__(self) -> None:
        if self.top_logprobs < 1:
            raise ValueError("top_logprobs must be at least 1")


@dataclasses.dataclass(frozen=True)
class ProviderResponse:
    answer_tokens: tuple[tuple[str, float], ...]
    raw_text: str = ""

    def __post_init__(self) -> None:
        if not self.answer_tokens:
            raise ProviderFailureError("provider returned no answer tokens")


class Provider(abc.ABC):
    """One autorater backend: a prompt in, token logprobs out."""

    @abc.abstractmethod
    def send(self, request: ProviderRequest) -> ProviderResponse:
        raise NotImplementedError


def prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class ReplayStore:
    """Directory of recorded responses, one JSON file per prompt hash."""

    def __init__(self, root: Path | str) -> None:
        self.root = Path(root)

    def path_for(self, digest: str) -> Path:
        return self.root / f"{digest}.json"

    def save(
        self,
        prompt_text: str,
        answer_tokens: Sequence[tuple[str, float]],
        raw_text: str = "",
    ) -> str:
        digest = prompt_hash(prompt_text)
        record = {
            "prompt_hash": digest,
            "prompt_text": prompt_text,
            "answer_tokens": [[token, float(lp)] for token, lp in answer_tokens],
            "raw_text": raw_text,
        }
        self.root.mkdir(parents=True, exist_ok=True)
        payload = json.dumps(record, ensure_ascii=False, sort_keys=True, indent=2) + "\n"
        self.path_for(digest).write_text(payload, encoding="utf-8")
        return digest

    def has(self, digest: str) -> bool:
        return self.path_for(digest).is_file()

    def load(self, digest: str) -> dict:
        path = self.path_for(digest)
        if not path.is_file():
            raise ReplayMissError(f"no recorded response for prompt hash {digest}")
        try:
            record = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ProviderFailureError(f"unreadable replay record {path.name}: {exc}") from exc
        if record.get("prompt_hash") != digest:
            raise ProviderFailureError(
                f"replay record {path.name} carries mismatched prompt_hash"
            )
        return record

    def missing(self, prompts: Sequence[str]) -> list[str]:
        """Hashes of the given prompts that have no recorded response."""
        return [
            digest
            for digest in (prompt_hash(p) for p in prompts)
            if not self.has(digest)
        ]


class ReplayProvider(Provider):
    def __init__(self, store: ReplayStore | Path | str) -> None:
        self.store = store if isinstance(store, ReplayStore) else ReplayStore(store)

    def send(self, request: ProviderRequest) -> ProviderResponse:
        record = self.store.load(prompt_hash(request.prompt))
        try:
            tokens = tuple((str(t), float(lp)) for t, lp in record["answer_tokens"])
            raw_text = str(record.get("raw_text", ""))
        except (KeyError, TypeError, ValueError) as exc:
            raise ProviderFailureError(f"malformed replay record: {exc}") from exc
        return ProviderResponse(answer_tokens=tokens, raw_text=raw_text)


def query(
    provider: Provider,
    requests: Sequence[ProviderRequest],
    max_workers: Optional[int] = None,
) -> list[ProviderResponse]:
    """Send every request through the provider, preserving request order.

    With max_workers above 1 the requests are issued concurrently; the
    response list still lines up index for index with the input. Transport
    errors surface as ProviderFailure.
    """

    def one(request: ProviderRequest) -> ProviderResponse:
        try:
            return provider.send(request)
        except AgreekitError:
            raise
        except Exception as exc:
            raise ProviderFailureError(f"provider call failed: {exc}") from exc

    if max_workers is not None and max_workers > 1 and len(requests) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(one, requests))
    return [one(request) for request in requests]
