import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divkit import textproc
from divkit.textproc import (MaskCounter, TokenSequence, builtin_embed,
                             builtin_pos, head_types, load_pos_sidecar,
                             semantic_mask, tokenize, vocab_tail_mask)

from conftest import make_dataset


def test_tokenize_examples():
    assert tokenize("A man is walking.").tokens == ("a", "man", "is", "walking", ".")
    assert tokenize("He isn't here").tokens == ("he", "is", "n't", "here")
    assert tokenize("").tokens == ()


def test_tokenize_contractions():
    assert tokenize("she's we're they'll I've he'd I'm").tokens == (
        "she", "'s", "we", "'re", "they", "'ll", "i", "'ve", "he", "'d",
        "i", "'m")


def test_tokenize_punctuation_and_decimals():
    assert tokenize("wait, what?!").tokens == ("wait", ",", "what", "?", "!")
    assert tokenize("costs $3.88 today").tokens == ("costs", "$", "3.88", "today")
    assert tokenize('"quoted"').tokens == ("``", "quoted", "''")


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=60))
def test_tokenize_pure_and_clean(text):
    first = tokenize(text)
    second = tokenize(text)
    assert first == second
    for tok in first.tokens:
        assert tok == tok.lower()
        assert not any(ch.isspace() for ch in tok)


def test_semantic_mask_example():
    seq = TokenSequence(tokens=("a", "man", "runs"),
                        pos=("DET", "NOUN", "VERB"))
    out = semantic_mask(seq, MaskCounter())
    assert out.tokens == ("a", "⟨MASK_1⟩", "⟨MASK_2⟩")
    assert out.pos == seq.pos


def test_semantic_mask_untouched():
    seq = TokenSequence(tokens=("the", "red", "one"),
                        pos=("DET", "ADJ", "NUM"))
    assert semantic_mask(seq, MaskCounter()).tokens == seq.tokens


def test_semantic_mask_unique_across_captions():
    counter = MaskCounter()
    a = semantic_mask(TokenSequence(("man",), ("NOUN",)), counter)
    b = semantic_mask(TokenSequence(("man",), ("NOUN",)), counter)
    assert a.tokens != b.tokens
    assert len(set(a.tokens) & set(b.tokens)) == 0


def test_semantic_mask_requires_pos():
    with pytest.raises(ValueError, match="POS"):
        semantic_mask(TokenSequence(("man",)), MaskCounter())


def test_semantic_mask_preserves_length():
    seq = builtin_pos(tokenize("a man runs in the park ."))
    assert len(semantic_mask(seq, MaskCounter())) == len(seq)


def test_head_types_cumulative():
    assert head_types({"a": 9, "b": 1}, 0.9) == {"a"}


def test_head_types_tie_break_lexicographic():
    counts = {w: 1 for w in "abcdefghij"}
    head = head_types(counts, 0.9)
    assert head == set("abcdefghi")  # ceil(0.9 * 10) lexicographically first


def test_vocab_tail_mask_example():
    ds = make_dataset([("s", "train", ["a a a a a a a a a b"])])
    out = vocab_tail_mask(ds, 0.9)
    tokens = out[("s", 0)].tokens
    assert tokens[:9] == ("a",) * 9
    assert tokens[9] == "⟨UNK_1⟩"


def test_vocab_tail_mask_fraction_one_is_identity():
    ds = make_dataset([("s", "train", ["a man runs", "a dog walks"])])
    out = vocab_tail_mask(ds, 1.0)
    assert out[("s", 0)].tokens == tokenize("a man runs").tokens


def test_vocab_tail_mask_preserves_token_count():
    ds = make_dataset([("s", "train", ["a man runs fast", "dogs run"]),
                       ("t", "train", ["a cat sits"])])
    plain = sum(len(tokenize(r)) for s in ds.samples for r in s.references)
    masked = vocab_tail_mask(ds, 0.5)
    assert sum(len(seq) for seq in masked.values()) == plain


def test_vocab_tail_mask_unk_unique_per_occurrence():
    ds = make_dataset([("s", "train", ["b b b", "a a a a a a a"])])
    out = vocab_tail_mask(ds, 0.7)  # head = {a}, three b occurrences masked
    masked = out[("s", 0)].tokens
    assert len(set(masked)) == 3
    assert all(t.startswith("⟨UNK_") for t in masked)


def test_builtin_embed_norm_and_identity():
    v1 = builtin_embed(tokenize("a man is walking down the street"))
    v2 = builtin_embed(tokenize("A man is walking down the street"))
    assert abs(np.linalg.norm(v1) - 1.0) < 1e-6
    assert np.allclose(v1, v2)
    assert np.linalg.norm(builtin_embed(tokenize(""))) == 0.0


def test_builtin_embed_disjoint_ngrams_orthogonal():
    # no shared character 3-5 grams -> cosine distance 1 (unless hash collision)
    a = builtin_embed(TokenSequence(("aaaaaa",)))
    b = builtin_embed(TokenSequence(("bbbbbb",)))
    cos = float(np.dot(a, b))
    assert cos == pytest.approx(0.0, abs=1e-9)


def test_builtin_pos_examples():
    assert builtin_pos(TokenSequence(("a", "man", "runs"))).pos == (
        "DET", "NOUN", "VERB")
    assert builtin_pos(TokenSequence(("qwzrtx",))).pos == ("NOUN",)
    assert builtin_pos(TokenSequence(("qwzrting",))).pos == ("VERB",)


def test_builtin_pos_punct_and_num():
    assert builtin_pos(TokenSequence((".", "3.88"))).pos == ("PUNCT", "NUM")


def test_pos_sidecar_roundtrip(tmp_path):
    ds = make_dataset([("a", "train", ["a man runs", "a dog"])])
    path = tmp_path / "pos.jsonl"
    path.write_text(
        '{"sample_id": "a", "ref_index": 0, "tags": ["DET", "NOUN", "VERB"]}\n'
        '{"sample_id": "a", "ref_index": 1, "tags": ["DET", "NOUN"]}\n')
    tags = load_pos_sidecar(ds, str(path))
    assert tags[("a", 0)] == ("DET", "NOUN", "VERB")


def test_pos_sidecar_length_mismatch(tmp_path):
    ds = make_dataset([("a", "train", ["a man runs"])])
    path = tmp_path / "pos.jsonl"
    path.write_text('{"sample_id": "a", "ref_index": 0, "tags": ["DET"]}\n')
    with pytest.raises(ValueError, match="3 tokens"):
        load_pos_sidecar(ds, str(path))


def test_pos_sidecar_missing_record(tmp_path):
    ds = make_dataset([("a", "train", ["a man runs", "more text"])])
    path = tmp_path / "pos.jsonl"
    path.write_text('{"sample_id": "a", "ref_index": 0, "tags": ["DET", "NOUN", "VERB"]}\n')
    with pytest.raises(ValueError, match="missing POS record"):
        load_pos_sidecar(ds, str(path))


def test_mask_counter_partitioning():
    even = MaskCounter(start=0, step=2)
    odd = MaskCounter(start=1, step=2)
    assert [even.take() for _ in range(3)] == [0, 2, 4]
    assert [odd.take() for _ in range(3)] == [1, 3, 5]


def test_masking_policy_validation():
    with pytest.raises(ValueError):
        textproc.MaskingPolicy(kind="bogus")
    with pytest.raises(ValueError):
        textproc.MaskingPolicy(head_fraction=0.0)
