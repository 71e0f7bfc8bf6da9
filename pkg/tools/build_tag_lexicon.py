"""Regenerate ``src/minrev/textproc/data/tag_lexicon.tsv``.

Takes the most frequent open-class English words (frequency order from
``wordfreq``) and assigns each the most likely Penn tag from Brill's lexicon
(shipped inside the ``pattern3`` source distribution), collapsed to the
coarse tagset used by the rule tagger.

    pip install wordfreq
    pip download pattern3 --no-deps && tar xzf pattern3-*.tar.gz
    python tools/build_tag_lexicon.py pattern3-3.0.0/pattern3/text/en
"""
import argparse
import re
from pathlib import Path

OPEN_CLASS = {
    "NN": "NOUN", "NNS": "NOUN",
    "VB": "VERB", "VBD": "VERB", "VBG": "VERB", "VBN": "VERB", "VBP": "VERB", "VBZ": "VERB",
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ",
    "RB": "ADV", "RBR": "ADV", "RBS": "ADV",
}
WORD = re.compile(r"^[a-z]+(?:['-][a-z]+)*$")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("pattern_en_dir", type=Path)
    parser.add_argument("--size", type=int, default=10000)
    parser.add_argument(
        "--out",
        type=Path,
        default=Path(__file__).resolve().parent.parent / "src/minrev/textproc/data/tag_lexicon.tsv",
    )
    args = parser.parse_args()

    brill = {}
    for line in (args.pattern_en_dir / "en-lexicon.txt").read_text(encoding="utf-8").splitlines():
        if line.startswith(";;;") or " " not in line:
            continue
        word, tag = line.split(" ", 1)
        # Lowercase entries win over capitalised ones.
        if word.islower() or word.lower() not in brill:
            brill[word.lower()] = tag.strip()

    from wordfreq import top_n_list

    picked = {}
    for word in top_n_list("en", 200000):
        if word in picked or not WORD.match(word):
            continue
        coarse = OPEN_CLASS.get(brill.get(word, ""))
        if coarse:
            picked[word] = coarse
        if len(picked) >= args.size:
            break

    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("# word<TAB>coarse tag; derived from Brill's lexicon (MIT licence, 1993 MIT/UPenn)\n")
        fh.write("# and wordfreq frequency ranks; regenerate with tools/build_tag_lexicon.py\n")
        for word in sorted(picked):
            fh.write(f"{word}\t{picked[word]}\n")
    print(f"wrote {len(picked)} entries to {args.out}")


if __name__ == "__main__":
    main()
