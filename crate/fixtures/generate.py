#!/usr/bin/env python3
"""Regenerates the synthetic fixture resources in this directory.

Output is deterministic; rerunning overwrites every file with the same bytes.
"""

import json
import math
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
rng = random.Random(20240611)

# id, pos, lemmas, parents
NOUNS = [
    ("entity", ["entity"], []),
    ("artifact", ["artifact"], ["entity"]),
    ("structure", ["structure", "construction"], ["artifact"]),
    ("instrumentality", ["instrumentality"], ["structure"]),
    ("conveyance", ["conveyance"], ["instrumentality"]),
    ("vehicle", ["vehicle"], ["conveyance"]),
    ("wheeled-vehicle", ["wheeled_vehicle"], ["vehicle"]),
    ("car", ["car", "auto", "automobile"], ["wheeled-vehicle"]),
    ("bicycle", ["bicycle", "bike"], ["wheeled-vehicle"]),
    ("truck", ["truck", "lorry"], ["wheeled-vehicle"]),
    ("bus", ["bus"], ["wheeled-vehicle"]),
    ("vessel", ["vessel"], ["vehicle"]),
    ("boat", ["boat"], ["vessel"]),
    ("ship", ["ship"], ["vessel"]),
    ("building", ["building"], ["structure"]),
    ("factory", ["factory", "plant"], ["building"]),
    ("house", ["house", "home"], ["building"]),
    ("church", ["church"], ["building"]),
    ("school", ["school"], ["building"]),
    ("tool", ["tool"], ["instrumentality"]),
    ("hammer", ["hammer"], ["tool"]),
    ("knife", ["knife"], ["tool"]),
    ("organism", ["organism", "being"], ["entity"]),
    ("animal", ["animal", "beast"], ["organism"]),
    ("mammal", ["mammal"], ["animal"]),
    ("dog", ["dog"], ["mammal"]),
    ("cat", ["cat"], ["mammal"]),
    ("horse", ["horse"], ["mammal"]),
    ("cow", ["cow"], ["mammal"]),
    ("bird", ["bird"], ["animal"]),
    ("eagle", ["eagle"], ["bird"]),
    ("sparrow", ["sparrow"], ["bird"]),
    ("plant-life", ["flora"], ["organism"]),
    ("tree", ["tree"], ["plant-life"]),
    ("flower", ["flower"], ["plant-life"]),
    ("rose", ["rose"], ["flower"]),
    ("food", ["food"], ["entity"]),
    ("fruit", ["fruit"], ["food"]),
    ("apple", ["apple"], ["fruit"]),
    ("pear", ["pear"], ["fruit"]),
    ("bread", ["bread"], ["food"]),
    ("cake", ["cake"], ["food"]),
]

VERBS = [
    ("move", ["move"], []),
    ("travel", ["travel", "go"], ["move"]),
    ("walk", ["walk"], ["travel"]),
    ("run", ["run"], ["travel"]),
    ("leave", ["leave", "depart"], ["travel"]),
    ("consume", ["consume"], []),
    ("eat", ["eat"], ["consume"]),
    ("drink", ["drink"], ["consume"]),
    ("communicate", ["communicate"], []),
    ("speak", ["speak", "talk"], ["communicate"]),
    ("write", ["write"], ["communicate"]),
    ("think", ["think"], []),
    ("know", ["know"], ["think"]),
]

# Semantic clusters used for embeddings, norms and the corpus.
CLUSTERS = {
    "vehicle": ["car", "bicycle", "truck", "bus", "boat", "ship", "vehicle", "automobile", "bike"],
    "building": ["factory", "house", "church", "school", "building", "structure", "home"],
    "tool": ["hammer", "knife", "tool"],
    "animal": ["dog", "cat", "horse", "cow", "bird", "eagle", "sparrow", "animal", "mammal"],
    "plant": ["tree", "flower", "rose", "flora"],
    "food": ["apple", "pear", "bread", "cake", "fruit", "food"],
    "motion": ["walk", "run", "go", "leave", "move", "travel", "depart"],
    "consume": ["eat", "drink", "consume"],
    "speech": ["speak", "talk", "write", "communicate"],
    "mind": ["think", "know"],
}
EXTRA_WORDS = ["road", "wheel", "engine", "wall", "roof", "blade", "fur", "wing", "leaf", "sugar", "step",
               "mouth", "word", "idea", "river", "stone"]


def parent_map(rows):
    return {sid: parents for sid, _, parents in rows}


def lemma_map(rows):
    out = {}
    for sid, lemmas, _ in rows:
        for lemma in lemmas:
            out.setdefault(lemma, []).append(sid)
    return out


def ancestors(sid, parents):
    chain = [sid]
    while parents[chain[-1]]:
        chain.append(parents[chain[-1]][0])
    return chain


def path_len(a, b, parents):
    ca, cb = ancestors(a, parents), ancestors(b, parents)
    common = [x for x in ca if x in cb]
    if not common:
        return len(ca) + len(cb)
    lcs = common[0]
    return ca.index(lcs) + cb.index(lcs)


def write(name, text):
    (HERE / name).write_text(text)


def taxonomy():
    lines = ["# id\tpos\tlemmas\tparents"]
    for pos, rows in (("n", NOUNS), ("v", VERBS)):
        for sid, lemmas, parents in rows:
            lines.append(f"{sid}\t{pos}\t{','.join(lemmas)}\t{','.join(parents)}")
    write("taxonomy.tsv", "\n".join(lines) + "\n")


def dataset():
    pairs = []
    for pos, rows in (("N", NOUNS), ("V", VERBS)):
        parents = parent_map(rows)
        lemmas = lemma_map(rows)
        words = sorted(w for w in lemmas if "_" not in w)
        candidates = [(a, b) for i, a in enumerate(words) for b in words[i + 1:]]
        rng.shuffle(candidates)
        wanted = 50 if pos == "N" else 10
        if pos == "N":
            head = [("car", "bicycle"), ("car", "factory")]
            candidates = head + [c for c in candidates if c not in head]
        for a, b in candidates[:wanted]:
            d = min(path_len(x, y, parents) for x in lemmas[a] for y in lemmas[b])
            rating = 10.0 / (1.0 + 0.6 * d) + rng.gauss(0.0, 0.6)
            rating = min(10.0, max(0.0, rating))
            pairs.append((a, b, pos, round(rating, 2)))
    pairs.append(("good", "bad", "A", 1.2))
    lines = ["word1\tword2\tPOS\tSimLex999\tconc(w1)"]
    lines += [f"{a}\t{b}\t{p}\t{r:.2f}\t{rng.uniform(1, 7):.2f}" for a, b, p, r in pairs]
    write("simlex_mini.txt", "\n".join(lines) + "\n")
    return [(a, b) for a, b, p, _ in pairs if p != "A"]


def all_words():
    out = []
    for rows in (NOUNS, VERBS):
        for _, lemmas, _ in rows:
            out += [w for w in lemmas if "_" not in w]
    return sorted(set(out))


def cluster_of(word):
    for name, members in CLUSTERS.items():
        if word in members:
            return name
    return None


def counts(words):
    lines = ["lemma,count"]
    for w in words:
        lines.append(f"{w},{rng.randint(1, 400)}")
    write("counts.csv", "\n".join(lines) + "\n")


def vectors(words):
    vocab = words + EXTRA_WORDS
    slots = {"lsa10.vec": 10, "lsa100.vec": 24, "w2v200.vec": 24, "wiki300.vec": 32}
    for name, dim in slots.items():
        centroids = {c: [rng.gauss(0, 1) for _ in range(dim)] for c in list(CLUSTERS) + [None]}
        noise = 0.5 if name != "lsa10.vec" else 0.9
        rows = []
        for w in vocab:
            if name == "lsa10.vec" and w == "sparrow":
                continue
            c = centroids[cluster_of(w)]
            v = [x + rng.gauss(0, noise) for x in c]
            rows.append(w + " " + " ".join(f"{x:.6f}" for x in v))
        write(name, f"{len(rows)} {dim}\n" + "\n".join(rows) + "\n")


def norms(words):
    profile = {
        "vehicle": (5.5, 5.0, 6.2, 5.5, 6.0),
        "building": (5.2, 3.5, 6.0, 5.0, 6.1),
        "tool": (4.8, 4.2, 5.8, 5.4, 6.0),
        "animal": (6.4, 5.2, 6.3, 5.0, 6.2),
        "plant": (6.8, 3.2, 6.0, 5.6, 6.0),
        "food": (7.0, 4.6, 6.2, 5.8, 6.1),
        "motion": (5.8, 4.8, 4.0, 5.6, 3.4),
        "consume": (6.2, 4.4, 4.4, 5.6, 3.6),
        "speech": (6.0, 4.0, 3.6, 5.8, 2.8),
        "mind": (6.2, 3.6, 2.6, 6.0, 1.9),
    }
    missing = {"flora", "depart"}
    lines = ["word,valence,arousal,imageability,dominance,concreteness"]
    for w in words:
        if w in missing:
            continue
        base = profile.get(cluster_of(w), (5.0, 4.0, 4.0, 5.0, 3.5))
        vals = [b + rng.gauss(0, 0.6) for b in base]
        lines.append(w + "," + ",".join(f"{v:.2f}" for v in vals))
    write("norms.csv", "\n".join(lines) + "\n")


def frequency(words):
    lines = ["word,count"]
    total = 0
    for w in words + EXTRA_WORDS:
        c = int(math.exp(rng.uniform(1.0, 9.0)))
        total += c
        lines.append(f"{w},{c}")
    lines.append(f"__total__,{total * 50}")
    write("frequency.csv", "\n".join(lines) + "\n")


def reference(words):
    extra = ["cat", "bat", "hat", "rat", "mat", "cot", "cut", "dig", "dot", "log", "fog", "bog",
             "bun", "bud", "pus", "cow", "cod", "how", "row", "low", "now", "bow", "ban", "can",
             "car", "bar", "far", "jar", "tar", "war", "cap", "tap", "rose", "nose", "hose",
             "rise", "ride", "bake", "lake", "make", "take", "fake", "tree", "free", "three",
             "house", "mouse", "horse", "worse", "walk", "talk", "tall", "ball", "call", "eat",
             "bat", "beat", "heat", "meat", "seat", "run", "bun", "fun", "gun", "sun", "ship",
             "shop", "chip", "dip", "lip", "hip", "pear", "bear", "dear", "fear", "gear", "year"]
    write("reference.txt", "\n".join(sorted(set(words + extra))) + "\n")


def ap(words):
    lines = ["word,ap"]
    for w in words[::2]:
        lines.append(f"{w},{rng.uniform(0.5, 3.0):.3f}")
    write("ap.csv", "\n".join(lines) + "\n")


def corpus():
    templates = {
        "vehicle": ["the {} drove down the road", "a {} has an engine and a wheel", "we took the {} to town"],
        "building": ["the {} has a wall and a roof", "people work inside the {}", "they built a new {}"],
        "tool": ["use the {} to cut", "the {} has a sharp blade"],
        "animal": ["the {} has fur", "a {} ran across the field", "the {} ate some grass"],
        "plant": ["the {} has a green leaf", "a {} grows by the river"],
        "food": ["we ate the {}", "the {} tastes of sugar", "a fresh {} for lunch"],
        "motion": ["they {} to the river", "we {} every step of the way"],
        "consume": ["they {} at noon", "we {} with our mouth"],
        "speech": ["they {} a word", "we {} an idea aloud"],
        "mind": ["they {} the idea", "we {} it well"],
    }
    lines = []
    for _ in range(1200):
        c = rng.choice(list(CLUSTERS))
        w = rng.choice(CLUSTERS[c])
        lines.append(rng.choice(templates[c]).format(w))
    write("corpus.txt", "\n".join(lines) + "\n")


def config():
    cfg = {
        "dataset": "simlex_mini.txt",
        "resources": {
            "taxonomy": {"path": "taxonomy.tsv", "format": "tsv"},
            "counts": "counts.csv",
            "embeddings": {
                "LSAb10": "lsa10.vec",
                "LSAb100": "lsa100.vec",
                "w2vb200": "w2v200.vec",
                "w2vwiki300": "wiki300.vec",
            },
            "norms": "norms.csv",
            "frequency": "frequency.csv",
            "ap": "ap.csv",
            "reference": "reference.txt",
        },
        "experiment": {"train_size": 36, "test_size": 12, "iterations": 10, "seed": 7},
        "models": "all",
        "output": {"dir": "results", "formats": ["csv", "json"], "scatter": [7]},
    }
    write("mini.json", json.dumps(cfg, indent=2) + "\n")


def main():
    words = all_words()
    taxonomy()
    dataset()
    counts(words)
    vectors(words)
    norms(words)
    frequency(words)
    reference(words)
    ap(words)
    corpus()
    config()


if __name__ == "__main__":
    main()
