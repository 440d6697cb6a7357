"""Words over a finite generating set with formal inverses."""

from __future__ import annotations

from .errors import BadParameter


class GenSet:
    """Ordered generator labels with an involutive inverse pairing.

    Built from (label, inverse_label) pairs; a pair with equal entries
    declares a self-inverse generator (an involution).
    """

    def __init__(self, pairs):
        self.pairs = tuple((a, b) for a, b in pairs)
        self._inv = {}
        for a, b in self.pairs:
            self._inv[a] = b
            self._inv[b] = a
        self.symbols = tuple(dict.fromkeys(s for p in self.pairs for s in p))
        self.positive = tuple(a for a, _ in self.pairs)
        if len(set(self.symbols)) != len(self.symbols):
            raise BadParameter("duplicate generator label")

    def inverse(self, sym: str) -> str:
        try:
            return self._inv[sym]
        except KeyError:
            raise BadParameter(f"unknown generator {sym!r}") from None

    def __contains__(self, sym):
        return sym in self._inv

    def __iter__(self):
        return iter(self.symbols)

    def __repr__(self):
        return f"GenSet({list(self.symbols)})"


class GroupWord:
    """A word over a GenSet; the empty word is the identity.

    Multiplication freely reduces across the seam only, so letters the
    caller wrote stay as written elsewhere.
    """

    __slots__ = ("gens", "letters")

    def __init__(self, gens: GenSet, letters=()):
        self.gens = gens
        letters = tuple(letters)
        for s in letters:
            if s not in gens:
                raise BadParameter(f"letter {s!r} not in generating set")
        self.letters = letters

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return (isinstance(other, GroupWord)
                and self.letters == other.letters)

    def __hash__(self):
        return hash(self.letters)

    def __mul__(self, other):
        if isinstance(other, str):
            other = GroupWord(self.gens, (other,))
        a, b = list(self.letters), list(other.letters)
        while a and b and self.gens.inverse(a[-1]) == b[0]:
            a.pop()
            b.pop(0)
        return GroupWord(self.gens, a + b)

    def inverse(self) -> "GroupWord":
        return GroupWord(self.gens,
                         tuple(self.gens.inverse(s) for s in reversed(self.letters)))

    def __pow__(self, n: int) -> "GroupWord":
        if n < 0:
            return self.inverse() ** (-n)
        out = GroupWord(self.gens)
        for _ in range(n):
            out = out * self
        return out

    def free_reduce(self) -> "GroupWord":
        out = []
        for s in self.letters:
            if out and self.gens.inverse(out[-1]) == s:
                out.pop()
            else:
                out.append(s)
        return GroupWord(self.gens, out)

    def is_identity_word(self) -> bool:
        return not self.free_reduce().letters

    def __repr__(self):
        return "e" if not self.letters else " ".join(self.letters)


def parse_word(gens: GenSet, text: str) -> GroupWord:
    """Whitespace-separated symbols; 'e' or '' is the identity."""
    text = text.strip()
    if text in ("", "e"):
        return GroupWord(gens)
    return GroupWord(gens, text.split())
