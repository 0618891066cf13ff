#!/usr/bin/env python3
"""Regenerates the bundled toy dataset in data/toy.

The toy language model is an explicit bigram table so that the reading
times below can be simulated from its word surprisals without running the
C++ code.  Output is deterministic for a given --seed.
"""
import argparse
import csv
import json
import math
import pathlib
import struct

import numpy as np

EOS = "<|endoftext|>"
WORDS = [
    "the", "a", "cat", "dog", "sat", "on", "ran", "to", "park", "in", "small", "big",
    "house", "old", "man", "woman", "read", "book", "quiet", "room", "was", "very",
    "happy", "and", "then", "slept", "under", "tree", "garden", "she", "he", "saw",
    "bird", "sang", "song", "morning", "bright", "sun", "warm", "car",
]
PIECES = ["pet", "s"]
PUNCT = [".", ","]

ITEMS = [
    ["the old man sat in the small house",
     "he read a book in the quiet room",
     "then he slept under the big tree"],
    ["the cat sat on the carpet and the dog ran to the park",
     "a small bird sang a song in the morning",
     "the bright sun was very warm"],
    ["she saw the old woman in the garden",
     "the woman was very happy and sang a song",
     "then she read a book under the tree"],
    ["the dog saw a bird in the park",
     "the big cat ran to the house and slept",
     "he was happy and the sun was bright"],
]
LINE_LENGTH = 12  # words per display line, running across sentences


def build_vocab():
    vocab = ["Ġ" + w for w in WORDS] + PIECES + PUNCT + [EOS]
    assert len(vocab) <= 64
    return vocab


def segment(word, index):
    if "Ġ" + word in index:
        return [index["Ġ" + word]]
    if word == "carpet":
        return [index["Ġcar"], index["pet"]]
    if word.endswith("s") and "Ġ" + word[:-1] in index:
        return [index["Ġ" + word[:-1]], index["s"]]
    raise ValueError(word)


def is_boundary(tok):
    return tok.startswith("Ġ") or tok in PUNCT or tok == EOS


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "toy"))
    ap.add_argument("--seed", type=int, default=20241)
    ap.add_argument("--subjects", type=int, default=12)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)

    vocab = build_vocab()
    index = {t: i for i, t in enumerate(vocab)}
    V = len(vocab)
    boundary = np.array([is_boundary(t) for t in vocab])

    # Bigram counts from the corpus bias the random table toward the text.
    counts = np.zeros((V + 1, V))  # row V is the start-of-text context
    for item in ITEMS:
        for sent in item:
            prev = V
            for w in sent.split():
                for t in segment(w, index):
                    counts[prev, t] += 1
                    prev = t
            counts[prev, index["."]] += 1
    logits = rng.normal(size=(V + 1, V)) * 1.2 + 2.5 * np.log1p(counts)
    # Word pieces only follow their stems.
    for p in PIECES:
        logits[:, index[p]] -= 6.0
    logits[index["Ġcar"], index["pet"]] = 3.0
    table = np.exp(logits - logits.max(axis=1, keepdims=True))
    table /= table.sum(axis=1, keepdims=True)
    # The JSON stores probabilities; renormalize after rounding.
    table = np.round(table, 12)
    table /= table.sum(axis=1, keepdims=True)

    def row(prev):
        return table[V if prev < 0 else prev]

    def word_logprob(prev, word):
        lp = 0.0
        for t in segment(word, index):
            lp += math.log(row(prev)[t])
            prev = t
        return lp + math.log(row(prev)[boundary].sum()), prev

    seg_table = {"carpet": segment("carpet", index)}
    rows = [{"context": [-1], "probs": row(-1).tolist()}]
    rows += [{"context": [t], "probs": row(t).tolist()} for t in range(V)]
    model = {"vocab": vocab, "eos": EOS, "segmentation": seg_table, "order": 2, "rows": rows}
    (out / "toy_model.json").write_text(json.dumps(model) + "\n")

    # Stimuli with display lines that run across sentence boundaries.
    contexts = []
    with open(out / "stimuli.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["item_id", "sentence_id", "word_index", "word_text", "line_id"])
        for i, item in enumerate(ITEMS, start=1):
            pos = 0
            for s, sent in enumerate(item, start=1):
                prev = -1
                words = sent.split()
                for k, word in enumerate(words):
                    line = f"L{pos // LINE_LENGTH + 1}"
                    w.writerow([f"i{i}", f"s{s}", k, word, line])
                    lp, prev = word_logprob(prev, word)
                    contexts.append({"item": f"i{i}", "sentence": f"s{s}", "index": k, "word": word,
                                     "lp": lp, "position": k, "before": words[:k]})
                    pos += 1

    # Cloze responses: a sharpened copy of the LM's word distribution over
    # the candidate list, so cloze and LM predictability are correlated.
    candidates = WORDS + ["carpet"]
    cloze_lines = []
    for c in contexts:
        prev = -1
        for word in c["before"]:
            _, prev = word_logprob(prev, word)
        lps = np.array([word_logprob(prev, cand)[0] for cand in candidates])
        p = np.exp(1.3 * lps)
        p /= p.sum()
        n = int(rng.integers(20, 41))
        draws = rng.choice(len(candidates), size=n, p=p)
        responses = [candidates[d] for d in draws]
        cloze_lines.append(json.dumps({"item_id": c["item"], "sentence_id": c["sentence"],
                                       "word_index": c["index"], "responses": responses}))
        counts_c = responses.count(c["word"])
        c["cloze_bits"] = -math.log2((counts_c + 1) / (n + 200))
    (out / "cloze.jsonl").write_text("\n".join(cloze_lines) + "\n")

    # Word frequencies per billion for every vocabulary word.
    freq = {w: float(10 ** rng.uniform(2.0, 6.5)) for w in WORDS}
    freq.update({"the": 5.0e7, "a": 2.2e7, "and": 2.5e7, "in": 1.6e7, "to": 2.0e7, "carpet": 3.1e3,
                 "pet": 2.0e4, "s": 1.0e5})
    with open(out / "freq.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["word", "per_billion"])
        for word in sorted(freq):
            w.writerow([word, f"{freq[word]:.6g}"])

    # Static embeddings: random, with a few deliberately close pairs.
    d = 8
    emb = rng.normal(size=(V, d))
    for a, b in [("cat", "dog"), ("man", "woman"), ("house", "room"), ("park", "garden"), ("sun", "morning")]:
        emb[index["Ġ" + b]] = emb[index["Ġ" + a]] + 0.15 * rng.normal(size=d)
    with open(out / "embeddings.pdem", "wb") as f:
        f.write((json.dumps({"magic": "PDEM", "version": 1, "dim_v": V, "dim_d": d}) + "\n").encode())
        f.write(struct.pack("<%df" % (V * d), *emb.astype(np.float32).ravel().tolist()))

    # Reading times: baseline covariates, LM surprisal, a weaker cloze
    # effect, a subject intercept and Gaussian noise.
    subjects = [f"p{j:02d}" for j in range(1, args.subjects + 1)]
    offsets = rng.normal(scale=30.0, size=len(subjects))
    for measure, base, noise in (("SPR", 300.0, 40.0), ("FP", 210.0, 35.0), ("GP", 260.0, 45.0)):
        with open(out / f"rt_{measure.lower()}.csv", "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            header = ["subject_id", "item_id", "sentence_id", "word_index", "measure", "rt_ms"]
            if measure != "SPR":
                header.append("prev_fixated")
            w.writerow(header)
            for j, subj in enumerate(subjects):
                for c in contexts:
                    uni = -math.log2(freq.get(c["word"], 0.01) / 1e9)
                    rt = (base + offsets[j] + 9.0 * len(c["word"]) + 2.0 * c["position"] + 3.0 * uni
                          + 11.0 * (-c["lp"] / math.log(2)) + 3.0 * c["cloze_bits"]
                          + rng.normal(scale=noise))
                    row_out = [subj, c["item"], c["sentence"], c["index"], measure, f"{max(rt, 80.0):.1f}"]
                    if measure != "SPR":
                        fixated = int(rng.random() < 0.7)
                        row_out[5] = f"{max(rt + (25.0 if fixated else -10.0), 80.0):.1f}"
                        row_out.append(fixated)
                    w.writerow(row_out)


if __name__ == "__main__":
    main()
