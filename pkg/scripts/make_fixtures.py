"""Regenerate the JSON algebra files under fixtures/."""

from pathlib import Path

from nonassoc import builtin, change_of_basis
from nonassoc.cli import serialize_algebra

OUT = Path(__file__).resolve().parent.parent / "fixtures"

# unimodular integer basis change (columns are the new basis vectors)
SCRAMBLE_H = [[1, 0, 1, 0],
              [2, 1, 0, -1],
              [0, 1, 1, 1],
              [-1, 0, 1, 1]]


def main():
    OUT.mkdir(exist_ok=True)
    for name in ("reals", "complexes", "quaternions", "octonions", "sedenions"):
        (OUT / f"{name}.json").write_text(serialize_algebra(builtin(name)), encoding="utf-8")
    H = builtin("quaternions")
    S = change_of_basis(H, SCRAMBLE_H)
    S.name = "scrambled_H"
    (OUT / "scrambled_H.json").write_text(serialize_algebra(S), encoding="utf-8")
    # e0 e2 = -e2, so the declared unit [1, 0, 0, 0] fails on e2
    text = serialize_algebra(H).replace('"name": "quaternions"', '"name": "broken_quaternions"')
    text = text.replace('"c": "1",\n      "i": 0,\n      "j": 2,\n      "k": 2',
                        '"c": "-1",\n      "i": 0,\n      "j": 2,\n      "k": 2')
    (OUT / "broken_quaternions.json").write_text(text, encoding="utf-8")


if __name__ == "__main__":
    main()
