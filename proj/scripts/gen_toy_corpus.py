#!/usr/bin/env python3
"""Generates the bundled toy corpus (data/toy).

Label construction
------------------
* A sentence is sexist iff it contains one of the SEXIST_MARKERS.
* Each sexist sentence belongs to a category and to one of that
  category's child vectors. The child is encoded by a CHILD_KEYWORD
  ("kilo" = first child, "lima" = second, ...). Child keywords are shared
  across categories, so the keyword alone is ambiguous: without the
  parent you cannot tell 1.1 from 2.1.
* The category keyword that would disambiguate is only present in a
  fraction of sentences (CAT_KEYWORD_RATE), which is what makes
  parent-conditioned fine-grained training measurably better than
  unconditioned training on this corpus.

Regenerating rewrites data/toy deterministically (fixed seed).
"""

import csv
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "toy"

CATEGORIES = {
    "1. threats, plans to harm and incitement": [
        "1.1 threats of harm",
        "1.2 incitement and encouragement of harm",
    ],
    "2. derogation": [
        "2.1 descriptive attacks",
        "2.2 aggressive and emotive attacks",
        "2.3 dehumanising attacks & overt sexual objectification",
    ],
    "3. animosity": [
        "3.1 casual use of gendered slurs, profanities, and insults",
        "3.2 immutable gender differences and gender stereotypes",
        "3.3 backhanded gendered compliments",
        "3.4 condescending explanations or unwelcome advice",
    ],
    "4. prejudiced discussions": [
        "4.1 supporting mistreatment of individual women",
        "4.2 supporting systemic discrimination against women as a group",
    ],
}

FILLERS = [
    "the", "a", "to", "of", "and", "in", "on", "it", "is", "was", "for",
    "with", "at", "by", "this", "that", "from", "but", "they", "we",
]
SEXIST_MARKERS = ["foxtrot", "tango"]
DECOYS = ["alpha", "bravo"]
CAT_KEYWORDS = {
    "1. threats, plans to harm and incitement": "quebec",
    "2. derogation": "romeo",
    "3. animosity": "sierra",
    "4. prejudiced discussions": "victor",
}
CHILD_KEYWORDS = ["kilo", "lima", "mike", "november"]

TRAIN_PER_VECTOR = 16
TRAIN_CAT_KW = 9        # of TRAIN_PER_VECTOR, carry the category keyword
TRAIN_NOT_SEXIST = 124
DEV_PER_VECTOR = 4
DEV_CAT_KW = 2
DEV_NOT_SEXIST = 44
POOL_SEXIST_LIKE = 40
POOL_NEUTRAL = 60


def sentence(rng, keywords):
    n_fillers = rng.randint(6, 10)
    words = [rng.choice(FILLERS) for _ in range(n_fillers)]
    for kw in keywords:
        words.insert(rng.randint(0, len(words)), kw)
    return " ".join(words)


def sexist_row(rng, category, vector, with_cat_kw):
    child_idx = CATEGORIES[category].index(vector)
    keywords = [rng.choice(SEXIST_MARKERS), CHILD_KEYWORDS[child_idx]]
    if with_cat_kw:
        keywords.append(CAT_KEYWORDS[category])
    return sentence(rng, keywords), "sexist", category, vector


def neutral_row(rng):
    keywords = [rng.choice(DECOYS)] if rng.random() < 0.5 else []
    return sentence(rng, keywords), "not sexist", "none", "none"


def labeled_split(rng, prefix, per_vector, with_cat_kw, n_not_sexist):
    rows = []
    for category, vectors in CATEGORIES.items():
        for vector in vectors:
            for i in range(per_vector):
                text, b, c, v = sexist_row(rng, category, vector,
                                           i < with_cat_kw)
                rows.append([text, b, c, v])
    for _ in range(n_not_sexist):
        rows.append(list(neutral_row(rng)))
    rng.shuffle(rows)
    return [[f"{prefix}{i:04d}"] + row for i, row in enumerate(rows, 1)]


def pool_rows(rng):
    rows = []
    categories = list(CATEGORIES)
    for i in range(POOL_SEXIST_LIKE):
        category = categories[i % len(categories)]
        vector = rng.choice(CATEGORIES[category])
        text, _, _, _ = sexist_row(rng, category, vector, rng.random() < 0.5)
        rows.append(text)
    for _ in range(POOL_NEUTRAL):
        rows.append(neutral_row(rng)[0])
    rng.shuffle(rows)
    return [[f"pool{i:04d}", text] for i, text in enumerate(rows, 1)]


def write(path, header, rows):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, quoting=csv.QUOTE_ALL, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    print(f"{path}: {len(rows)} rows")


def main():
    rng = random.Random(20230710)
    OUT.mkdir(parents=True, exist_ok=True)
    labeled_header = ["id", "text", "label_binary", "label_category",
                      "label_vector"]
    write(OUT / "train.csv", labeled_header,
          labeled_split(rng, "train", TRAIN_PER_VECTOR, TRAIN_CAT_KW,
                        TRAIN_NOT_SEXIST))
    write(OUT / "dev.csv", labeled_header,
          labeled_split(rng, "dev", DEV_PER_VECTOR, DEV_CAT_KW,
                        DEV_NOT_SEXIST))
    write(OUT / "pool.csv", ["id", "text"], pool_rows(rng))


if __name__ == "__main__":
    main()
