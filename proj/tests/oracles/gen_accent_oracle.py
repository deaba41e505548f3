#!/usr/bin/env python3
"""Freeze expected accent and glyph translations using Python's unicodedata.

The TeX meaning of each macro is written here by Unicode character name, so
the expectations do not come from texmeta's own table. Run from the repo root:

    python3 tests/oracles/gen_accent_oracle.py

Writes tests/data/accent_nfc_oracle.tsv and tests/data/glyph_oracle.tsv.
"""

import string
import unicodedata
from pathlib import Path

ACCENTS = {
    '"': "COMBINING DIAERESIS",
    "'": "COMBINING ACUTE ACCENT",
    "`": "COMBINING GRAVE ACCENT",
    "^": "COMBINING CIRCUMFLEX ACCENT",
    "~": "COMBINING TILDE",
    "=": "COMBINING MACRON",
    ".": "COMBINING DOT ABOVE",
    "u": "COMBINING BREVE",
    "v": "COMBINING CARON",
    "H": "COMBINING DOUBLE ACUTE ACCENT",
    "c": "COMBINING CEDILLA",
    "k": "COMBINING OGONEK",
    "b": "COMBINING MACRON BELOW",
    "d": "COMBINING DOT BELOW",
    "r": "COMBINING RING ABOVE",
    "t": "COMBINING DOUBLE INVERTED BREVE",
}

GLYPHS = {
    "ss": ["LATIN SMALL LETTER SHARP S"],
    "o": ["LATIN SMALL LETTER O WITH STROKE"],
    "O": ["LATIN CAPITAL LETTER O WITH STROKE"],
    "ae": ["LATIN SMALL LETTER AE"],
    "AE": ["LATIN CAPITAL LETTER AE"],
    "oe": ["LATIN SMALL LIGATURE OE"],
    "OE": ["LATIN CAPITAL LIGATURE OE"],
    "aa": ["LATIN SMALL LETTER A WITH RING ABOVE"],
    "AA": ["LATIN CAPITAL LETTER A WITH RING ABOVE"],
    "l": ["LATIN SMALL LETTER L WITH STROKE"],
    "L": ["LATIN CAPITAL LETTER L WITH STROKE"],
    "dj": ["LATIN SMALL LETTER D WITH STROKE"],
    "DJ": ["LATIN CAPITAL LETTER D WITH STROKE"],
    "ng": ["LATIN SMALL LETTER ENG"],
    "NG": ["LATIN CAPITAL LETTER ENG"],
    "th": ["LATIN SMALL LETTER THORN"],
    "TH": ["LATIN CAPITAL LETTER THORN"],
    "dh": ["LATIN SMALL LETTER ETH"],
    "DH": ["LATIN CAPITAL LETTER ETH"],
    "dag": ["DAGGER"],
    "ddag": ["DOUBLE DAGGER"],
    "S": ["SECTION SIGN"],
    "P": ["PILCROW SIGN"],
    "copyright": ["COPYRIGHT SIGN"],
    "pounds": ["POUND SIGN"],
    "textendash": ["EN DASH"],
    "textemdash": ["EM DASH"],
    "textquotedblleft": ["LEFT DOUBLE QUOTATION MARK"],
    "textquotedblright": ["RIGHT DOUBLE QUOTATION MARK"],
    "ldots": ["HORIZONTAL ELLIPSIS"],
    "LaTeX": ["LATIN CAPITAL LETTER L", "LATIN SMALL LETTER A", "LATIN CAPITAL LETTER T",
              "LATIN SMALL LETTER E", "LATIN CAPITAL LETTER X"],
    "TeX": ["LATIN CAPITAL LETTER T", "LATIN SMALL LETTER E", "LATIN CAPITAL LETTER X"],
}


def hexes(s):
    return " ".join(f"{ord(c):04X}" for c in s)


def main():
    out = Path("tests/data")
    out.mkdir(parents=True, exist_ok=True)
    lines = ["# accent\tbase\texpected code points\tprecomposed (1) or base+mark (0)"]
    for acc, mark_name in ACCENTS.items():
        mark = unicodedata.lookup(mark_name)
        for base in string.ascii_letters:
            composed = unicodedata.normalize("NFC", base + mark)
            lines.append(f"\\{acc}\t{base}\t{hexes(composed)}\t{1 if len(composed) == 1 else 0}")
        # dotless i and j behave as plain i and j under an accent
        for macro, letter in (("\\i", "i"), ("\\j", "j")):
            composed = unicodedata.normalize("NFC", letter + mark)
            lines.append(f"\\{acc}\t{macro}\t{hexes(composed)}\t{1 if len(composed) == 1 else 0}")
    (out / "accent_nfc_oracle.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    glines = ["# macro\texpected code points\tUnicode names"]
    for macro, names in GLYPHS.items():
        s = "".join(unicodedata.lookup(n) for n in names)
        glines.append(f"\\{macro}\t{hexes(s)}\t{', '.join(names)}")
    (out / "glyph_oracle.tsv").write_text("\n".join(glines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
