#!/usr/bin/env python3
"""Regenerate the bundled dataset, vocabulary and romanization schemes under data/."""
import argparse
import json
import pathlib
import unicodedata

from concepts import ANSWER_CUES, CONCEPTS, HINDI_CLOZE, HINDI_SYNONYMS, LABELS

MARKER = "▁"

CONSONANTS = [
    # letter, natural, code-point scheme
    ("क", "k", "k"), ("ख", "kh", "K"), ("ग", "g", "g"), ("घ", "gh", "G"), ("ङ", "n", "f"),
    ("च", "ch", "c"), ("छ", "chh", "C"), ("ज", "j", "j"), ("झ", "jh", "J"), ("ञ", "n", "F"),
    ("ट", "t", "t"), ("ठ", "th", "T"), ("ड", "d", "d"), ("ढ", "dh", "D"), ("ण", "n", "N"),
    ("त", "t", "w"), ("थ", "th", "W"), ("द", "d", "x"), ("ध", "dh", "X"), ("न", "n", "n"),
    ("प", "p", "p"), ("फ", "ph", "P"), ("ब", "b", "b"), ("भ", "bh", "B"), ("म", "m", "m"),
    ("य", "y", "y"), ("र", "r", "r"), ("ल", "l", "l"), ("व", "v", "v"), ("श", "sh", "S"),
    ("ष", "sh", "R"), ("स", "s", "s"), ("ह", "h", "h"),
]
VOWELS = [
    ("अ", "a", "_a"), ("आ", "aa", "_A"), ("इ", "i", "_i"), ("ई", "ee", "_I"), ("उ", "u", "_u"),
    ("ऊ", "oo", "_U"), ("ऋ", "ri", "_q"), ("ए", "e", "_e"), ("ऐ", "ai", "_E"), ("ओ", "o", "_o"),
    ("औ", "au", "_O"),
]
MATRAS = [
    ("ा", "aa", "A"), ("ि", "i", "i"), ("ी", "ee", "I"), ("ु", "u", "u"), ("ू", "oo", "U"),
    ("ृ", "ri", "q"), ("े", "e", "e"), ("ै", "ai", "E"), ("ो", "o", "o"), ("ौ", "au", "O"),
]
SIGNS = [
    ("्", "", "~"), ("ं", "n", "M"), ("ँ", "n", "z"), ("ः", "h", "H"), ("़", "", "Z"),
]
NATURAL_EXTRA = [("ॉ", "o"), ("ऑ", "o"), ("।", ".")]


def natural_scheme():
    rules = [[s, n] for s, n, _ in CONSONANTS + VOWELS + MATRAS + SIGNS]
    rules += [[s, n] for s, n in NATURAL_EXTRA]
    return {"name": "devanagari-natural", "mode": "lossy", "rules": rules}


def codepoint_scheme():
    rules = [[s, c] for s, _, c in CONSONANTS + VOWELS + MATRAS + SIGNS]
    rules.append(["।", "|"])
    return {"name": "devanagari-cp", "mode": "lossless", "rules": rules}


def identity_scheme():
    return {"name": "identity", "mode": "lossless", "rules": []}


def nfc(s):
    return unicodedata.normalize("NFC", s)


def build_records():
    records = []
    for cid, en, en_syn, fr, de, hi, hi_rom, cloze in CONCEPTS:
        hi_syn, hi_rom_syn = HINDI_SYNONYMS.get(cid, ([], []))
        rows = [
            ("en", "native", en, en_syn, cloze),
            ("fr", "native", fr, [], None),
            ("de", "native", de, [], None),
            ("hi", "native", hi, hi_syn, HINDI_CLOZE.get(cid)),
            ("hi", "romanized", hi_rom, hi_rom_syn, None),
        ]
        entries = []
        for lang, script, word, syn, sentence in rows:
            entry = {"language": lang, "script": script, "label": LABELS[(lang, script)],
                     "word": nfc(word)}
            if syn:
                entry["synonyms"] = [nfc(s) for s in syn]
            if sentence is not None:
                entry["cloze_sentence"] = sentence
                entry["answer_cue"] = ANSWER_CUES[(lang, script)]
            entries.append(entry)
        records.append({"concept_id": cid, "entries": entries})
    return records


def prefixes(word):
    return [word[:i] for i in range(1, len(word) + 1)]


def suffixes(word):
    return [word[i:] for i in range(len(word))]


def build_vocab(records):
    surfaces = {MARKER, "___", "\n"}
    texts = []
    for rec in records:
        for e in rec["entries"]:
            words = [e["word"]] + e.get("synonyms", [])
            texts += words + [e["label"]]
            if "answer_cue" in e:
                texts.append(e["answer_cue"])
            if "cloze_sentence" in e:
                texts.append(e["cloze_sentence"])
                for piece in e["cloze_sentence"].split():
                    run = piece.strip('".,:;?!')
                    if run:
                        surfaces.update({run, MARKER + run})
            for w in words:
                surfaces.update({w, MARKER + w})
                surfaces.update(prefixes(w)[1:])
                surfaces.update(MARKER + p for p in prefixes(w)[1:])
                if e["script"] == "romanized":
                    surfaces.update(suffixes(w))
            surfaces.update({e["label"], MARKER + e["label"]})
            if "answer_cue" in e:
                surfaces.update({e["answer_cue"], MARKER + e["answer_cue"]})
    for text in texts:
        for ch in text:
            if ch != " ":
                surfaces.update({ch, MARKER + ch})
    for ch in "abcdefghijklmnopqrstuvwxyz\".,:?!'":
        surfaces.update({ch, MARKER + ch})
    ordered = [MARKER] + sorted(s for s in surfaces if s != MARKER)
    return {"space_marker": MARKER,
            "tokens": [{"id": i, "text": t} for i, t in enumerate(ordered)]}


def write_json(path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=pathlib.Path(__file__).resolve().parents[2] / "data",
                        type=pathlib.Path)
    args = parser.parse_args()
    records = build_records()
    ids = [r["concept_id"] for r in records]
    assert len(ids) == len(set(ids)), "duplicate concept ids"
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "concepts.jsonl", "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")
    vocab = build_vocab(records)
    write_json(args.out / "vocab.json", vocab)
    write_json(args.out / "schemes" / "devanagari_natural.json", natural_scheme())
    write_json(args.out / "schemes" / "devanagari_cp.json", codepoint_scheme())
    write_json(args.out / "schemes" / "identity.json", identity_scheme())
    print(f"{len(records)} concepts, {len(vocab['tokens'])} tokens -> {args.out}")


if __name__ == "__main__":
    main()
