"""Replay store round trips and the provider query seam."""

import hashlib
import json

import pytest

from agreekit.errors import ProviderFailureError, ReplayMissError
from agreekit.providers import (
    Provider,
    ProviderRequest,
    ProviderResponse,
    ReplayProvider,
    ReplayStore,
    prompt_hash,
    query,
)


class TestPromptHash:
    def test_is_sha256_hex(self):
        assert prompt_hash("abc") == hashlib.sha256(b"abc").hexdigest()
        assert len(prompt_hash("")) == 64

    def test_unicode_hashed_as_utf8(self):
        assert prompt_hash("café") == hashlib.sha256("café".encode("utf-8")).hexdigest()


class TestProviderRequest:
    def test_defaults(self):
        req = ProviderRequest("score this")
        assert req.top_logprobs == 5

    def test_top_logprobs_must_be_positive(self):
        with pytest.raises(ValueError):
            ProviderRequest("p", top_logprobs=0)


class TestProviderResponse:
    def test_empty_tokens_rejected(self):
        with pytest.raises(ProviderFailureError):
            ProviderResponse(answer_tokens=())


class TestReplayStore:
    def test_save_load_round_trip(self, tmp_path):
        store = ReplayStore(tmp_path / "replays")
        digest = store.save("the prompt", [("4", -0.2), ("5", -1.8)], raw_text="4")
        assert digest == prompt_hash("the prompt")
        assert store.has(digest)
        record = store.load(digest)
        assert record["prompt_text"] == "the prompt"
        assert record["answer_tokens"] == [["4", -0.2], ["5", -1.8]]
        assert record["raw_text"] == "4"

    def test_load_missing(self, tmp_path):
        store = ReplayStore(tmp_path)
        with pytest.raises(ReplayMissError):
            store.load(prompt_hash("never seen"))

    def test_missing_lists_unrecorded_prompts(self, tmp_path):
        store = ReplayStore(tmp_path)
        store.save("known", [("3", -0.1)])
        missing = store.missing(["known", "unknown one", "unknown two"])
        assert missing == [prompt_hash("unknown one"), prompt_hash("unknown two")]

    def test_corrupt_file_surfaces_as_provider_failure(self, tmp_path):
        store = ReplayStore(tmp_path)
        digest = store.save("p", [("1", -0.5)])
        store.path_for(digest).write_text("{not json", encoding="utf-8")
        with pytest.raises(ProviderFailureError):
            store.load(digest)

    def test_hash_mismatch_detected(self, tmp_path):
        store = ReplayStore(tmp_path)
        digest = store.save("p", [("1", -0.5)])
        record = json.loads(store.path_for(digest).read_text())
        record["prompt_hash"] = "0" * 64
        store.path_for(digest).write_text(json.dumps(record), encoding="utf-8")
        with pytest.raises(ProviderFailureError):
            store.load(digest)

    def test_files_are_stable_bytes(self, tmp_path):
        a = ReplayStore(tmp_path / "a")
        b = ReplayStore(tmp_path / "b")
        a.save("same prompt", [("2", -0.7)], raw_text="2")
        b.save("same prompt", [("2", -0.7)], raw_text="2")
        digest = prompt_hash("same prompt")
        assert a.path_for(digest).read_bytes() == b.path_for(digest).read_bytes()


class TestReplayProvider:
    def test_serves_recorded_response(self, tmp_path):
        store = ReplayStore(tmp_path)
        store.save("score the essay", [("4", -0.3), ("3", -2.0)], raw_text="4")
        provider = ReplayProvider(store)
        response = provider.send(ProviderRequest("score the essay"))
        assert response.answer_tokens == (("4", -0.3), ("3", -2.0))
        assert response.raw_text == "4"

    def test_accepts_path_directly(self, tmp_path):
        ReplayStore(tmp_path).save("p", [("1", -0.1)])
        provider = ReplayProvider(tmp_path)
        assert provider.send(ProviderRequest("p")).answer_tokens == (("1", -0.1),)

    def test_miss_raises(self, tmp_path):
        provider = ReplayProvider(tmp_path)
        with pytest.raises(ReplayMissError):
            provider.send(ProviderRequest("unrecorded"))


class EchoProvider(Provider):
    def __init__(self, fail_on=()):
        self.fail_on = set(fail_on)

    def send(self, request):
        if request.prompt in self.fail_on:
            raise RuntimeError("backend exploded")
        return ProviderResponse(answer_tokens=((request.prompt[-1], -0.1),))


class TestQuery:
    def test_order_preserved_sequential(self):
        responses = query(EchoProvider(), [ProviderRequest(f"p{i}") for i in range(5)])
        assert [r.answer_tokens[0][0] for r in responses] == ["0", "1", "2", "3", "4"]

    def test_order_preserved_concurrent(self):
        requests = [ProviderRequest(f"p{i}") for i in range(40)]
        sequential = query(EchoProvider(), requests)
        concurrent = query(EchoProvider(), requests, max_workers=8)
        assert concurrent == sequential

    def test_transport_error_wrapped(self):
        with pytest.raises(ProviderFailureError):
            query(EchoProvider(fail_on={"p1"}), [ProviderRequest("p0"), ProviderRequest("p1")])

    def test_replay_miss_passes_through_unwrapped(self, tmp_path):
        provider = ReplayProvider(tmp_path)
        with pytest.raises(ReplayMissError):
            query(provider, [ProviderRequest("missing")])
