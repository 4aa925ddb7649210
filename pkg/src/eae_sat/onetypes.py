"""1-types over a relational signature, and their z-relative extensions.

A 1-type records, per relation symbol, the truth of the diagonal atom
R(a,...,a) for one element.  Types are bit vectors indexed in signature
order; the canonical enumeration is binary counting with the first
signature symbol as least significant bit.

An extended type additionally records, for the current element a and a
fixed reference element b0, the truth of R(w) for every argument pattern
w over {b0, a}.  Pattern indices are integers whose bit j says whether
argument j is the current element (1) or the reference element (0).
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_ARITY_CAP = 3


class ArityCapExceeded(Exception):
    """A relation's arity exceeds the cap for extended-type solving."""

    def __init__(self, name, arity, cap):
        self.name = name
        self.arity = arity
        self.cap = cap
        super().__init__(
            f"relation {name} has arity {arity}, above the extended-type "
            f"arity cap {cap}")


@dataclass(frozen=True)
class OneType:
    bits: tuple[bool, ...]

    def bit(self, i):
        return self.bits[i]

    def index(self):
        """Position in the canonical enumeration (first bit = LSB)."""
        return sum(1 << i for i, b in enumerate(self.bits) if b)


@dataclass(frozen=True)
class ExtendedType:
    """Per relation (signature order), one boolean per argument pattern."""

    patterns: tuple[tuple[bool, ...], ...]

    def own_type(self):
        """Projection to all-current-element patterns: the element's 1-type."""
        return OneType(tuple(p[-1] for p in self.patterns))

    def z_type(self):
        """Projection to all-reference-element patterns: b0's 1-type."""
        return OneType(tuple(p[0] for p in self.patterns))

    def index(self):
        """Canonical position: binary counting over all pattern bits."""
        n = 0
        j = 0
        for pats in self.patterns:
            for b in pats:
                if b:
                    n |= 1 << j
                j += 1
        return n


@dataclass(frozen=True)
class GameState:
    """State of the counter-bounded solving game for one starting type."""

    pi0: OneType
    current: OneType
    counter: int


def enumerate_one_types(sig):
    """All 2^{|sig|} 1-types in canonical order."""
    k = len(sig)
    return tuple(
        OneType(tuple(bool(i >> j & 1) for j in range(k)))
        for i in range(1 << k)
    )


def type_of_element(structure, a):
    """The 1-type realized by element a: diagonal membership per relation."""
    bits = []
    for name, arity in structure.signature:
        bits.append((a,) * arity in structure.extents.get(name, frozenset()))
    return OneType(tuple(bits))


def initial_extended_type(sig, pi0):
    """Extended type of b0 itself: every pattern denotes b0's diagonal."""
    pats = []
    for i, (_, arity) in enumerate(sig):
        pats.append((pi0.bit(i),) * (1 << arity))
    return ExtendedType(tuple(pats))


def check_arity_cap(sig, cap=DEFAULT_ARITY_CAP):
    for name, arity in sig:
        if arity > cap:
            raise ArityCapExceeded(name, arity, cap)


def enumerate_extended_types(sig, pi0, cap=DEFAULT_ARITY_CAP):
    """All extended types whose reference projection is pi0, canonical order."""
    check_arity_cap(sig, cap)
    widths = [1 << arity for _, arity in sig]
    total = sum(widths)
    out = []
    for i in range(1 << total):
        pats = []
        j = 0
        ok = True
        for w, (ri, _) in zip(widths, enumerate(sig)):
            p = tuple(bool(i >> (j + b) & 1) for b in range(w))
            if p[0] != pi0.bit(ri):
                ok = False
                break
            pats.append(p)
            j += w
        if ok:
            out.append(ExtendedType(tuple(pats)))
    return tuple(out)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def render_one_type(t, sig):
    """Signed-symbol rendering, e.g. `{+P, -R}`; `{}` for the empty signature."""
    parts = [("+" if t.bit(i) else "-") + name for i, (name, _) in enumerate(sig)]
    return "{" + ", ".join(parts) + "}"


def one_type_from_symbols(symbols, sig):
    """Inverse of render_one_type's symbol list form."""
    values = {}
    for s in symbols:
        if not s or s[0] not in "+-":
            raise ValueError(f"bad signed symbol {s!r}")
        values[s[1:]] = s[0] == "+"
    bits = []
    for name, _ in sig:
        if name not in values:
            raise ValueError(f"signed symbol list misses relation {name}")
        bits.append(values.pop(name))
    if values:
        raise ValueError(f"unknown relation(s) in type: {sorted(values)}")
    return OneType(tuple(bits))


def pattern_string(p, arity):
    return "".join("x" if p >> j & 1 else "z" for j in range(arity))


def render_extended_type(t, sig):
    parts = []
    for i, (name, arity) in enumerate(sig):
        for p in range(1 << arity):
            parts.append(f"{name}[{pattern_string(p, arity)}]="
                         f"{1 if t.patterns[i][p] else 0}")
    return "{" + ", ".join(parts) + "}"
