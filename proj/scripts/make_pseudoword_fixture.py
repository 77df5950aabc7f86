#!/usr/bin/env python3
"""Generates the synthetic benchmark corpus under tests/fixtures/pseudoword.

The output is deterministic (fixed seed) English-like prose with strong
topical structure spread over eight topics, two of which carry the benchmark
target nouns ("harbor", "meadow"). Keeping each topic's share of the corpus
small keeps the pointwise MI of topic words well above the matrix threshold
even after the two targets are conflated, which is what the pseudoword
benchmark needs. The generated text is dedicated to the public domain (CC0).

Usage: python3 scripts/make_pseudoword_fixture.py [out_dir]
"""

import random
import sys
from pathlib import Path

SEED = 20010902
N_DOCS = 28
PARAGRAPHS_PER_DOC = 120
SENTENCES_PER_PARAGRAPH = (4, 7)
TARGET_RATE = 0.16  # chance that a noun slot in a target topic is the target

TOPICS = [
    {
        "target": "harbor",
        "nouns": ["ship", "sail", "mast", "captain", "crew", "tide", "wave",
                  "storm", "deck", "gull", "rope", "fog", "lighthouse",
                  "cargo", "pier", "sailor", "vessel", "keel", "buoy",
                  "rudder", "compass", "seaweed", "dock", "hull", "anchor"],
        "adjectives": ["salt", "wet", "grey", "broad", "stormy", "northern"],
        "verbs": ["rocked", "drifted", "anchored", "sailed", "moored",
                  "creaked", "pitched", "docked"],
    },
    {
        "target": "meadow",
        "nouns": ["grass", "sheep", "shepherd", "clover", "bee", "brook",
                  "willow", "lamb", "hay", "barn", "pasture", "dew",
                  "blossom", "herd", "hedge", "wheat", "furrow", "haystack",
                  "thrush", "bramble", "heather", "scythe", "pollen",
                  "daisy", "flock"],
        "adjectives": ["green", "sunny", "fragrant", "golden", "mown",
                       "flowering"],
        "verbs": ["grazed", "bloomed", "rustled", "ripened", "hummed",
                  "blossomed", "sprouted", "flowered"],
    },
    {
        "target": None,
        "nouns": ["street", "lamp", "carriage", "market", "clock", "tower",
                  "bridge", "crowd", "coin", "merchant", "printer", "square",
                  "bell", "gate", "cobble", "tavern", "roof", "chimney",
                  "stall", "ledger"],
        "adjectives": ["busy", "narrow", "crowded", "paved", "noisy"],
        "verbs": ["bustled", "rang", "jostled", "gathered", "bargained",
                  "clattered"],
    },
    {
        "target": None,
        "nouns": ["snow", "pine", "ridge", "glacier", "cliff", "summit",
                  "cabin", "trail", "echo", "granite", "slope", "avalanche",
                  "peak", "crag", "moraine", "icicle", "chasm"],
        "adjectives": ["cold", "steep", "frozen", "jagged", "windswept"],
        "verbs": ["climbed", "froze", "cracked", "glittered", "thawed",
                  "tumbled"],
    },
    {
        "target": None,
        "nouns": ["desert", "dune", "camel", "oasis", "caravan", "mirage",
                  "scorpion", "nomad", "sandal", "tent", "palm", "well",
                  "sandstorm", "ember", "canteen"],
        "adjectives": ["dry", "burning", "endless", "dusty", "parched"],
        "verbs": ["shimmered", "trudged", "scorched", "wandered", "baked"],
    },
    {
        "target": None,
        "nouns": ["library", "scroll", "candle", "scholar", "ink", "quill",
                  "parchment", "atlas", "lexicon", "shelf", "margin",
                  "treatise", "folio", "scribe", "binding"],
        "adjectives": ["dusty", "learned", "faded", "ancient", "patient"],
        "verbs": ["copied", "studied", "annotated", "catalogued", "faded"],
    },
    {
        "target": None,
        "nouns": ["forge", "hammer", "bellows", "iron", "anvil", "smith",
                  "tongs", "ingot", "furnace", "spark", "chisel", "rivet",
                  "horseshoe", "slag", "apprentice"],
        "adjectives": ["glowing", "soot", "ringing", "molten", "tempered"],
        "verbs": ["hammered", "glowed", "quenched", "forged", "sparked"],
    },
    {
        "target": None,
        "nouns": ["orchestra", "violin", "oboe", "conductor", "melody",
                  "chord", "rehearsal", "stage", "balcony", "overture",
                  "tempo", "encore", "cello", "flute", "podium"],
        "adjectives": ["soaring", "hushed", "triumphant", "minor", "bright"],
        "verbs": ["played", "swelled", "tuned", "echoed", "applauded"],
    },
]

NAMES = ["Elias", "Marlow", "Tabitha", "Corwin", "Ada", "Brand", "Selwyn",
         "Petra", "Osric", "Winifred"]
PLACES = ["Dunmore", "Karlsby", "Ostwick", "Fennel", "Tarvin", "Lowood"]
CONNECTIVES = ["and", "while", "as", "before", "after", "until", "because"]
OPENERS = ["In the morning", "By noon", "At dusk", "All that week",
           "Long ago", "Year after year", "In those days", "Later",
           "Toward evening", "Through the long season"]


def sentence(rng, topic):
    def noun():
        if topic["target"] and rng.random() < TARGET_RATE:
            return topic["target"]
        return rng.choice(topic["nouns"])

    adj = lambda: rng.choice(topic["adjectives"])
    verb = lambda: rng.choice(topic["verbs"])

    pattern = rng.randrange(6)
    if pattern == 0:
        words = ["The", adj(), noun(), verb(), "near", "the", noun()]
    elif pattern == 1:
        words = [rng.choice(OPENERS), "the", noun(), verb(),
                 rng.choice(CONNECTIVES), "the", adj(), noun(), verb()]
    elif pattern == 2:
        words = [rng.choice(NAMES), "found", "the", noun(),
                 rng.choice(CONNECTIVES), "the", noun(), verb(), "by",
                 "the", noun()]
    elif pattern == 3:
        words = ["The", noun(), "of", rng.choice(PLACES), verb(), "behind",
                 "the", adj(), noun()]
    elif pattern == 4:
        words = ["In", str(rng.randrange(1795, 1905)), "the", noun(), verb(),
                 rng.choice(CONNECTIVES), "the", noun(), verb()]
    else:
        words = ["A", adj(), noun(), "by", "the", noun(),
                 rng.choice(CONNECTIVES), "the", noun(), verb(), "past",
                 "the", adj(), noun()]
    text = " ".join(words)
    return text[0].upper() + text[1:] + rng.choice([".", ".", ".", "!", "?"])


def paragraph(rng):
    topic = TOPICS[rng.randrange(len(TOPICS))]
    n = rng.randrange(*SENTENCES_PER_PARAGRAPH)
    return " ".join(sentence(rng, topic) for _ in range(n))


def main():
    out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else
                   "tests/fixtures/pseudoword/corpus")
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    total = 0
    for d in range(N_DOCS):
        lines = [
            "Synthetic fixture text, dedicated to the public domain (CC0).",
            "*** START OF THIS FIXTURE BOOK ***",
            "",
        ]
        for _ in range(PARAGRAPHS_PER_DOC):
            lines.append(paragraph(rng))
            lines.append("")
        lines.append("*** END OF THIS FIXTURE BOOK ***")
        text = "\n".join(lines) + "\n"
        (out_dir / f"book{d:02d}.txt").write_text(text)
        total += len(text)
    print(f"wrote {N_DOCS} documents, {total} bytes")


if __name__ == "__main__":
    main()
