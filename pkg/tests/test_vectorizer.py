"""Bag-of-words vocabulary and feature-vector tests."""

import random

import pytest

from invclust.anonymizer import anonymize, serialize_aast
from invclust.errors import EmptyCorpus, ModeMismatch
from invclust.invariants import detect, flatten
from invclust.parser import parse
from invclust.renamer import rename
from invclust.tracer import run_suite
from invclust.unparse import unparse
from invclust.vectorizer import (ProgramDocs, Vocabulary, build_vocab,
                                 build_vocab_for_mode, documents_for_mode,
                                 ngrams, represent, tokenize, vectorize)

from conftest import LEFT_SRC, RIGHT_SRC, sum_suite

EXAMPLE_DOCS = ["a a", "e i", "a e i o u", "o i"]


def _docs(src):
    renamed, _ = rename(parse(src))
    log, verdicts = run_suite(renamed, sum_suite())
    assert verdicts == ["pass"] * 3
    return ProgramDocs(renamed_source=unparse(renamed),
                       aast_text=serialize_aast(anonymize(renamed)).text,
                       inv_text=flatten(detect(log)))


def test_tokenize_invariant_string():
    assert tokenize("int0 > 0") == ["int0", ">", "0"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_aast_string():
    assert tokenize("decl(id:ID,type:int)") == [
        "decl", "(", "id", ":", "ID", ",", "type", ":", "int", ")"]


def test_vocab_worked_example():
    vocab = build_vocab(EXAMPLE_DOCS, "inv", n=1)
    assert vocab.grams == ["a", "e", "i", "o", "u"]


def test_vocab_single_doc_three_tokens():
    vocab = build_vocab(["x + y"], "inv", n=3)
    assert len(vocab.grams) == 1


def test_vocab_order_independent():
    shuffled = list(EXAMPLE_DOCS)
    random.Random(3).shuffle(shuffled)
    assert build_vocab(EXAMPLE_DOCS, "inv", n=1).grams == \
        build_vocab(shuffled, "inv", n=1).grams


def test_vocab_empty_when_docs_too_short():
    with pytest.raises(EmptyCorpus):
        build_vocab(["x y"], "inv", n=3)


def test_vectorize_worked_example():
    vocab = build_vocab(EXAMPLE_DOCS, "inv", n=1)
    vec = vectorize("a i a u", vocab)
    assert vec.values == [0.5, 0.0, 0.25, 0.0, 0.25]


def test_vectorize_out_of_vocab_is_zero():
    vocab = build_vocab(EXAMPLE_DOCS, "inv", n=1)
    assert vectorize("z z z", vocab).values == [0.0] * 5


def test_combined_vector_is_concatenation():
    docs = [_docs(LEFT_SRC), _docs(RIGHT_SRC)]
    combined_vocab = build_vocab_for_mode(docs, "aast_inv")
    aast_vocab = build_vocab_for_mode(docs, "aast")
    inv_vocab = build_vocab_for_mode(docs, "inv")
    for d in docs:
        both = represent(d, combined_vocab).values
        aast = represent(d, aast_vocab).values
        inv = represent(d, inv_vocab).values
        assert both == aast + inv


def test_segment_l1_norms():
    docs = [_docs(LEFT_SRC), _docs(RIGHT_SRC)]
    vocab = build_vocab_for_mode(docs, "aast_inv")
    for d in docs:
        values = represent(d, vocab).values
        for lo, hi in vocab.segments:
            assert abs(sum(values[lo:hi]) - 1.0) < 1e-9


def test_alpha_equivalent_programs_same_syntax_vector():
    src = "int main() {\n  int x = 1;\n  x = x + 1;\n}\n"
    other = src.replace("x", "longname")
    docs = [_make_syntax_docs(src), _make_syntax_docs(other)]
    vocab = build_vocab_for_mode(docs, "syntax")
    assert represent(docs[0], vocab).values == represent(docs[1], vocab).values


def _make_syntax_docs(src):
    renamed, _ = rename(parse(src))
    return ProgramDocs(renamed_source=unparse(renamed), aast_text="",
                       inv_text="")


def test_pair_aast_vectors_differ():
    docs = [_docs(LEFT_SRC), _docs(RIGHT_SRC)]
    vocab = build_vocab_for_mode(docs, "aast")
    assert represent(docs[0], vocab).values != represent(docs[1], vocab).values


@pytest.mark.xfail(
    strict=True,
    reason="the two loop styles yield different tightest-bound invariants "
           "at matching points, so the flattened invariant documents and "
           "their vectors differ; see the criterion-1 analysis in the "
           "project notes")
def test_pair_inv_vectors_identical():
    docs = [_docs(LEFT_SRC), _docs(RIGHT_SRC)]
    vocab = build_vocab_for_mode(docs, "inv")
    assert represent(docs[0], vocab).values == represent(docs[1], vocab).values


def test_mode_mismatch():
    docs = _docs(LEFT_SRC)
    vocab = build_vocab_for_mode([docs], "aast")
    vocab.mode = "bogus"
    with pytest.raises(ModeMismatch):
        documents_for_mode(docs, "bogus")
    with pytest.raises(ModeMismatch):
        represent(docs, vocab)


def test_equal_docs_equal_vectors():
    vocab = build_vocab(EXAMPLE_DOCS, "inv", n=1)
    assert vectorize("a e i", vocab).values == vectorize("a e i", vocab).values


def test_document_doubling_keeps_normalized_vector():
    vocab = build_vocab(EXAMPLE_DOCS, "inv", n=1)
    once = vectorize("a i a u", vocab).values
    twice = vectorize("a i a u a i a u", vocab).values
    assert all(abs(x - y) < 1e-12 for x, y in zip(once, twice))


def test_idf_reweights_and_renormalizes():
    vocab = build_vocab(EXAMPLE_DOCS, "inv", n=1, idf=True)
    assert vocab.idf is not None and len(vocab.idf) == len(vocab.grams)
    vec = vectorize("a i a u", vocab)
    assert abs(sum(vec.values) - 1.0) < 1e-9
    # "a" appears in fewer docs than "i", so idf boosts it relative to tf.
    plain = vectorize("a i a u", build_vocab(EXAMPLE_DOCS, "inv", n=1))
    assert vec.values != plain.values


def test_vocab_json_round_trip():
    vocab = build_vocab_for_mode([_docs(LEFT_SRC), _docs(RIGHT_SRC)],
                                 "aast_inv")
    back = Vocabulary.from_dict(vocab.as_dict())
    assert back.grams == vocab.grams
    assert back.segments == vocab.segments
    assert back.mode == vocab.mode and back.n == vocab.n


def test_ngrams_basic():
    assert ngrams(["a", "b", "c", "d"], 3) == ["a b c", "b c d"]
    assert ngrams(["a", "b"], 3) == []
