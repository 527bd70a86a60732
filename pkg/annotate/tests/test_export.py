import json

import numpy as np
import pytest

from divkit_annotate.encoders import HASH_MODEL, HashEncoder, make_encoder
from divkit_annotate.jobs import (AlignmentError, AnnotationJob, core_tokenize,
                                  export_embeddings, export_pos)
from divkit_annotate.taggers import LexiconTagger

from conftest import build_fixture


def small_dataset(tmp_path, refs=None):
    refs = refs or ["a man runs", "a man runs", "A dog isn't small."]
    doc = {"name": "small",
           "samples": [{"id": "x", "split": "train", "references": refs}]}
    path = tmp_path / "small.json"
    path.write_text(json.dumps(doc))
    return str(path)


def read_sidecar(stem):
    manifest = json.loads(open(stem + ".emb.json").read())
    matrix = np.fromfile(stem + ".emb.bin", dtype="<f4").reshape(
        manifest["count"], manifest["dim"])
    return manifest, matrix


def test_hash_encoder_shape_and_determinism():
    enc = HashEncoder()
    a = enc.encode(["a man runs", "a man runs", ""])
    assert a.shape == (3, 384)
    assert np.array_equal(a[0], a[1])
    assert np.linalg.norm(a[2]) > 0  # empty text still yields a usable row


def test_export_embeddings_rows_and_manifest(tmp_path):
    ds = small_dataset(tmp_path)
    job = AnnotationJob(dataset_path=ds, out_stem=str(tmp_path / "s"),
                        model=HASH_MODEL)
    info = export_embeddings(job)
    manifest, matrix = read_sidecar(str(tmp_path / "s"))
    assert info["records"] == manifest["count"] == 3
    assert manifest["dim"] == 384
    assert len(manifest["records"]) == 3
    # identical caption strings share one row value
    rows = {(r["sample_id"], r["ref_index"]): r["row"]
            for r in manifest["records"]}
    assert np.array_equal(matrix[rows[("x", 0)]], matrix[rows[("x", 1)]])
    norms = np.linalg.norm(matrix, axis=1)
    assert np.allclose(norms, 1.0, atol=1e-3)


def test_export_embeddings_rerun_byte_identical(tmp_path):
    ds = small_dataset(tmp_path)
    job = AnnotationJob(dataset_path=ds, out_stem=str(tmp_path / "s"),
                        model=HASH_MODEL)
    export_embeddings(job)
    first = (open(str(tmp_path / "s.emb.json"), "rb").read(),
             open(str(tmp_path / "s.emb.bin"), "rb").read())
    export_embeddings(job)
    second = (open(str(tmp_path / "s.emb.json"), "rb").read(),
              open(str(tmp_path / "s.emb.bin"), "rb").read())
    assert first == second


def test_export_leaves_no_temp_files(tmp_path):
    ds = small_dataset(tmp_path)
    export_embeddings(AnnotationJob(dataset_path=ds,
                                    out_stem=str(tmp_path / "s"),
                                    model=HASH_MODEL))
    assert not list(tmp_path.glob("*.tmp"))


def test_bin_size_matches_format_arithmetic(tmp_path):
    ds = small_dataset(tmp_path)
    export_embeddings(AnnotationJob(dataset_path=ds,
                                    out_stem=str(tmp_path / "s"),
                                    model=HASH_MODEL))
    manifest, _ = read_sidecar(str(tmp_path / "s"))
    import os
    size = os.path.getsize(str(tmp_path / "s.emb.bin"))
    assert size == manifest["count"] * manifest["dim"] * 4


def test_core_tokenize_parses_stream(tmp_path, divkit_bin):
    ds = small_dataset(tmp_path, refs=["A man.", ""])
    job = AnnotationJob(dataset_path=ds, out_stem=str(tmp_path / "s"),
                        divkit_bin=divkit_bin)
    tokens = core_tokenize(job)
    assert tokens[("x", 0)] == ["a", "man", "."]
    assert tokens[("x", 1)] == []


def test_export_pos_golden_tags(tmp_path, divkit_bin):
    ds = small_dataset(tmp_path, refs=["a man runs", ""])
    job = AnnotationJob(dataset_path=ds, out_stem=str(tmp_path / "s"),
                        divkit_bin=divkit_bin)
    export_pos(job)
    lines = [json.loads(x) for x in
             open(str(tmp_path / "s.pos.jsonl")) if x.strip()]
    assert lines[0] == {"ref_index": 0, "sample_id": "x",
                        "tags": ["DET", "NOUN", "VERB"]}
    assert lines[1]["tags"] == []


def test_export_pos_rerun_identical(tmp_path, divkit_bin):
    ds = small_dataset(tmp_path)
    job = AnnotationJob(dataset_path=ds, out_stem=str(tmp_path / "s"),
                        divkit_bin=divkit_bin)
    export_pos(job)
    first = open(str(tmp_path / "s.pos.jsonl"), "rb").read()
    export_pos(job)
    assert open(str(tmp_path / "s.pos.jsonl"), "rb").read() == first


def test_pos_alignment_error_names_reference(tmp_path, divkit_bin, monkeypatch):
    ds = small_dataset(tmp_path, refs=["a man runs"])
    job = AnnotationJob(dataset_path=ds, out_stem=str(tmp_path / "s"),
                        divkit_bin=divkit_bin)

    class BrokenTagger:
        name = "broken"

        def tag(self, tokens):
            return ["NOUN"]  # wrong count on purpose

    import divkit_annotate.jobs as jobs_mod
    monkeypatch.setattr(jobs_mod, "make_tagger", lambda _m: BrokenTagger())
    with pytest.raises(AlignmentError, match=r"\('x', 0\)"):
        export_pos(job)


def test_lexicon_tagger_suffixes():
    tagger = LexiconTagger()
    assert tagger.tag(["a", "man", "runs", "qwzrting", "."]) == \
        ["DET", "NOUN", "VERB", "VERB", "PUNCT"]


def test_job_validation():
    with pytest.raises(ValueError):
        AnnotationJob(dataset_path="x", out_stem="y", batch_size=0)


def test_unknown_encoder_fails_cleanly():
    from divkit_annotate.encoders import EncoderError
    with pytest.raises(EncoderError):
        make_encoder("definitely/not-a-real-model-anywhere")


def test_fixture_builder_counts(tmp_path):
    _, total = build_fixture(tmp_path / "f.json", n_captions=37)
    assert total == 37
