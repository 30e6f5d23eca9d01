"""Reaction networks: complexes, reactions, validation, text and JSON formats.

Reaction-list format, one reaction per line::

    # comment
    R1: X1 -> 2 X1 + X2
    0 -> X
    A + 3/2 B <-> C

``0`` is the zero complex, coefficients are nonnegative rationals, an optional
``label:`` prefix names the reaction and ``<->`` expands to a forward and a
reverse reaction (the reverse gets the label suffix ``_rev``).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactla import RationalMatrix


class NetworkError(ValueError):
    """Raised when a network violates a structural invariant."""


class ParseError(NetworkError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class Complex:
    """A nonnegative rational combination of species, keyed by species name.

    Term order is remembered for display and species discovery, but equality
    and hashing are coefficient-wise.
    """

    __slots__ = ("terms", "_key")

    def __init__(self, terms: Iterable[tuple[str, Fraction | int]] | Mapping[str, Fraction | int] = ()):
        if isinstance(terms, Mapping):
            terms = terms.items()
        acc: dict[str, Fraction] = {}
        for name, c in terms:
            if not name:
                raise NetworkError("species name must be nonempty")
            c = Fraction(c)
            if c < 0:
                raise NetworkError(f"negative coefficient {c} for species {name!r}")
            acc[name] = acc.get(name, Fraction(0)) + c
        self.terms: tuple[tuple[str, Fraction], ...] = tuple((k, v) for k, v in acc.items() if v != 0)
        self._key = frozenset(self.terms)

    @classmethod
    def zero(cls) -> Complex:
        return cls()

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def species(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.terms)

    def coefficient(self, name: str) -> Fraction:
        for k, v in self.terms:
            if k == name:
                return v
        return Fraction(0)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.terms)

    def vector(self, species: Sequence[str]) -> tuple[Fraction, ...]:
        d = self.as_dict()
        return tuple(d.get(s, Fraction(0)) for s in species)

    def __add__(self, other: Complex) -> Complex:
        return Complex(self.terms + other.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def format(self, order: Sequence[str] | None = None) -> str:
        if self.is_zero:
            return "0"
        terms = self.terms
        if order is not None:
            pos = {s: i for i, s in enumerate(order)}
            terms = sorted(terms, key=lambda t: pos[t[0]])
        return " + ".join(name if c == 1 else f"{c} {name}" for name, c in terms)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Complex({self.format()!r})"


@dataclass(frozen=True)
class Reaction:
    reactant: int
    product: int
    label: str | None = None


class Network:
    """A chemical reaction network (species, complexes, reactions).

    Built through :meth:`from_reactions` or :func:`parse_network`; immutable
    afterwards. Species and complexes are ordered by first appearance.
    """

    __slots__ = ("species", "complexes", "reactions", "_species_index", "_complex_index", "_cache")

    def __init__(self, species: Sequence[str], complexes: Sequence[Complex], reactions: Sequence[Reaction]):
        self.species: tuple[str, ...] = tuple(species)
        self.complexes: tuple[Complex, ...] = tuple(complexes)
        self.reactions: tuple[Reaction, ...] = tuple(reactions)
        self._species_index = {s: i for i, s in enumerate(self.species)}
        self._complex_index = {c: i for i, c in enumerate(self.complexes)}
        self._cache: dict = {}
        self._validate()

    def _validate(self) -> None:
        if len(self._species_index) != len(self.species):
            raise NetworkError("duplicate species names")
        if len(self._complex_index) != len(self.complexes):
            raise NetworkError("duplicate complexes")
        if not self.reactions:
            raise NetworkError("a network needs at least one reaction")
        n = len(self.complexes)
        used = [False] * n
        seen = set()
        for j, rx in enumerate(self.reactions):
            if not (0 <= rx.reactant < n and 0 <= rx.product < n):
                raise NetworkError(f"reaction {j} references a missing complex")
            if rx.reactant == rx.product:
                raise NetworkError(f"reaction {j} is a loop ({self.complexes[rx.reactant]} -> itself)")
            pair = (rx.reactant, rx.product)
            if pair in seen:
                raise NetworkError(f"duplicate reaction {self.format_reaction(j)}")
            seen.add(pair)
            used[rx.reactant] = used[rx.product] = True
        for i, ok in enumerate(used):
            if not ok:
                raise NetworkError(f"complex {self.complexes[i]} occurs in no reaction")
        present = set()
        for c in self.complexes:
            for s in c.species:
                if s not in self._species_index:
                    raise NetworkError(f"complex {c} uses undeclared species {s!r}")
                present.add(s)
        for s in self.species:
            if s not in present:
                raise NetworkError(f"species {s!r} occurs in no complex")
        labels = [rx.label for rx in self.reactions if rx.label is not None]
        if len(set(labels)) != len(labels):
            raise NetworkError("reaction labels must be unique")

    @classmethod
    def from_reactions(
        cls,
        reactions: Iterable[tuple[Complex, Complex] | tuple[Complex, Complex, str | None]],
        species: Sequence[str] | None = None,
    ) -> Network:
        """Build a network from (reactant, product[, label]) triples.

        Complexes are deduplicated in first-appearance order. Species follow
        first appearance unless ``species`` fixes the order.
        """
        complexes: list[Complex] = []
        index: dict[Complex, int] = {}
        order: dict[str, None] = {}
        rxns = []
        for item in reactions:
            y, yp = item[0], item[1]
            label = item[2] if len(item) > 2 else None
            ids = []
            for c in (y, yp):
                if c not in index:
                    index[c] = len(complexes)
                    complexes.append(c)
                for s in c.species:
                    order.setdefault(s, None)
                ids.append(index[c])
            rxns.append(Reaction(ids[0], ids[1], label))
        return cls(list(order) if species is None else species, complexes, rxns)

    # sizes -----------------------------------------------------------------
    @property
    def m(self) -> int:
        return len(self.species)

    @property
    def n(self) -> int:
        return len(self.complexes)

    @property
    def r(self) -> int:
        return len(self.reactions)

    def species_index(self, name: str) -> int:
        return self._species_index[name]

    def complex_index(self, c: Complex) -> int:
        return self._complex_index[c]

    def has_complex(self, c: Complex) -> bool:
        return c in self._complex_index

    @property
    def zero_complex_index(self) -> int | None:
        return self._complex_index.get(Complex.zero())

    def complex_vector(self, i: int) -> tuple[Fraction, ...]:
        return self.complexes[i].vector(self.species)

    def reaction_vector(self, j: int) -> tuple[Fraction, ...]:
        rx = self.reactions[j]
        a, b = self.complex_vector(rx.reactant), self.complex_vector(rx.product)
        return tuple(q - p for p, q in zip(a, b))

    def reaction_vectors(self) -> list[tuple[Fraction, ...]]:
        if "rv" not in self._cache:
            self._cache["rv"] = [self.reaction_vector(j) for j in range(self.r)]
        return self._cache["rv"]

    def reaction_pairs(self) -> list[tuple[Complex, Complex, str | None]]:
        return [(self.complexes[rx.reactant], self.complexes[rx.product], rx.label) for rx in self.reactions]

    def reaction_index(self, key: int | str) -> int:
        """Resolve a reaction label or 0-based index."""
        if isinstance(key, int) and not isinstance(key, bool):
            if not 0 <= key < self.r:
                raise NetworkError(f"reaction index {key} out of range")
            return key
        for j, rx in enumerate(self.reactions):
            if rx.label == key:
                return j
        if isinstance(key, str) and key.isdigit():
            return self.reaction_index(int(key))
        raise NetworkError(f"unknown reaction label {key!r}")

    def format_reaction(self, j: int) -> str:
        rx = self.reactions[j]
        lhs = self.complexes[rx.reactant].format(self.species)
        rhs = self.complexes[rx.product].format(self.species)
        return f"{lhs} -> {rhs}"

    def reversible_partner(self) -> list[int | None]:
        """For each reaction the index of its reverse reaction, if present."""
        if "rev" not in self._cache:
            where = {(rx.reactant, rx.product): j for j, rx in enumerate(self.reactions)}
            self._cache["rev"] = [where.get((rx.product, rx.reactant)) for rx in self.reactions]
        return self._cache["rev"]

    # identity ----------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.species == other.species
            and self.complexes == other.complexes
            and self.reactions == other.reactions
        )

    def __hash__(self) -> int:
        return hash((self.species, self.complexes, self.reactions))

    def same_sets(self, other: Network) -> bool:
        """Equality as a triple of sets, ignoring ordering and labels."""
        return (
            set(self.species) == set(other.species)
            and set(self.complexes) == set(other.complexes)
            and {(a, b) for a, b, _ in self.reaction_pairs()} == {(a, b) for a, b, _ in other.reaction_pairs()}
        )

    def __repr__(self) -> str:
        return f"Network(m={self.m}, n={self.n}, r={self.r})"

    # serialization -----------------------------------------------------------
    def to_text(self) -> str:
        lines = []
        for j, rx in enumerate(self.reactions):
            prefix = f"{rx.label}: " if rx.label is not None else ""
            lines.append(prefix + self.format_reaction(j))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "species": [{"index": i, "name": s} for i, s in enumerate(self.species)],
            "complexes": [
                {
                    "index": i,
                    "terms": [
                        {"species": self._species_index[s], "coefficient": str(c)}
                        for s, c in sorted(cx.terms, key=lambda t: self._species_index[t[0]])
                    ],
                }
                for i, cx in enumerate(self.complexes)
            ],
            "reactions": [
                {"index": j, "reactant": rx.reactant, "product": rx.product, "label": rx.label}
                for j, rx in enumerate(self.reactions)
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: Mapping) -> Network:
        species = [None] * len(data["species"])
        for s in data["species"]:
            species[s["index"]] = s["name"]
        complexes = [None] * len(data["complexes"])
        for c in data["complexes"]:
            complexes[c["index"]] = Complex(
                [(species[t["species"]], Fraction(t["coefficient"])) for t in c["terms"]]
            )
        reactions = [None] * len(data["reactions"])
        for rx in data["reactions"]:
            reactions[rx["index"]] = Reaction(rx["reactant"], rx["product"], rx.get("label"))
        if any(x is None for x in species + complexes + reactions):
            raise NetworkError("indices in network JSON are not dense")
        return cls(species, complexes, reactions)

    @classmethod
    def from_json(cls, text: str) -> Network:
        return cls.from_dict(json.loads(text))


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<arrow><->|->)
  | (?P<plus>\+)
  | (?P<num>-?\d+(?:/\d+|\.\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_.\[\]']*)
  | (?P<colon>:)
    """,
    re.VERBOSE,
)


def _tokenize(line: str, lineno: int):
    pos = 0
    out = []
    while pos < len(line):
        mt = _TOKEN.match(line, pos)
        if mt is None:
            raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
        if mt.lastgroup != "ws":
            out.append((mt.lastgroup, mt.group(), pos + 1))
        pos = mt.end()
    return out


def _parse_complex(tokens, lineno: int, end_col: int) -> Complex:
    if not tokens:
        raise ParseError("missing complex", lineno, end_col)
    if len(tokens) == 1 and tokens[0][:2] == ("num", "0"):
        return Complex.zero()
    terms = []
    i = 0
    while True:
        if i >= len(tokens):
            raise ParseError("expected a term", lineno, end_col)
        coef = Fraction(1)
        kind, text, col = tokens[i]
        if kind == "num":
            if text.startswith("-"):
                raise ParseError(f"negative coefficient {text}", lineno, col)
            coef = Fraction(text)
            if coef == 0:
                raise ParseError("zero coefficient", lineno, col)
            i += 1
            if i >= len(tokens):
                raise ParseError("coefficient without species", lineno, col)
            kind, text, col = tokens[i]
        if kind != "name":
            raise ParseError(f"expected species name, found {text!r}", lineno, col)
        terms.append((text, coef))
        i += 1
        if i == len(tokens):
            break
        kind, text, col = tokens[i]
        if kind != "plus":
            raise ParseError(f"expected '+', found {text!r}", lineno, col)
        i += 1
    return Complex(terms)


def parse_reactions(text: str) -> list[tuple[Complex, Complex, str | None, int]]:
    """Parse reaction-list text into (reactant, product, label, line) tuples."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        toks = _tokenize(line, lineno)
        label = None
        if len(toks) >= 2 and toks[1][0] == "colon":
            if toks[0][0] != "name":
                raise ParseError("reaction label must be an identifier", lineno, toks[0][2])
            label = toks[0][1]
            toks = toks[2:]
        for kind, text_, col in toks:
            if kind == "colon":
                raise ParseError("unexpected ':'", lineno, col)
        arrows = [k for k, t in enumerate(toks) if t[0] == "arrow"]
        if len(arrows) != 1:
            col = toks[arrows[1]][2] if len(arrows) > 1 else len(line) + 1
            raise ParseError("expected exactly one '->' or '<->'", lineno, col)
        a = arrows[0]
        arrow_col = toks[a][2]
        lhs = _parse_complex(toks[:a], lineno, arrow_col)
        rhs = _parse_complex(toks[a + 1 :], lineno, len(line) + 1)
        if lhs == rhs:
            raise ParseError(f"loop reaction {lhs} -> {rhs}", lineno, arrow_col)
        out.append((lhs, rhs, label, lineno))
        if toks[a][1] == "<->":
            out.append((rhs, lhs, None if label is None else f"{label}_rev", lineno))
    return out


def parse_network(text: str) -> Network:
    """Parse a reaction-list document into a validated :class:`Network`."""
    entries = parse_reactions(text)
    if not entries:
        raise ParseError("no reactions found", 1, 1)
    seen: dict[tuple[Complex, Complex], int] = {}
    labels: dict[str, int] = {}
    for y, yp, label, lineno in entries:
        if (y, yp) in seen:
            raise ParseError(f"duplicate reaction {y} -> {yp} (first on line {seen[(y, yp)]})", lineno, 1)
        seen[(y, yp)] = lineno
        if label is not None:
            if label in labels:
                raise ParseError(f"duplicate label {label!r}", lineno, 1)
            labels[label] = lineno
    return Network.from_reactions((y, yp, label) for y, yp, label, _ in entries)


def load_network(path) -> Network:
    """Read a network from a reaction-list file, or from network JSON if it ends in ``.json``."""
    with open(path) as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        return Network.from_json(text)
    return parse_network(text)


# --------------------------------------------------------------------------
# set operations and matrices


def union(nets: Sequence[Network]) -> Network:
    """Set union of networks; species are identified by name.

    Reactions keep the order of first occurrence across the inputs, and the
    first label seen for a reaction wins.
    """
    if not nets:
        raise NetworkError("union of no networks")
    reactions: dict[tuple[Complex, Complex], str | None] = {}
    taken: set[str] = set()
    species: dict[str, None] = {}
    for net in nets:
        for s in net.species:
            species.setdefault(s, None)
        for y, yp, label in net.reaction_pairs():
            if (y, yp) in reactions:
                continue
            if label in taken:
                label = None
            reactions[(y, yp)] = label
            if label is not None:
                taken.add(label)
    return Network.from_reactions(((y, yp, lb) for (y, yp), lb in reactions.items()), species=list(species))


def stoichiometric_matrix(net: Network) -> RationalMatrix:
    """m x r matrix whose columns are the reaction vectors."""
    return RationalMatrix.from_columns(net.reaction_vectors(), net.m)


def incidence_matrix(net: Network) -> RationalMatrix:
    """n x r matrix with -1 at the reactant complex and +1 at the product complex."""
    cols = []
    for rx in net.reactions:
        col = [0] * net.n
        col[rx.reactant] = -1
        col[rx.product] = 1
        cols.append(col)
    return RationalMatrix.from_columns(cols, net.n)


def map_of_complexes(net: Network) -> RationalMatrix:
    """m x n matrix whose column i is complex i in species coordinates."""
    return RationalMatrix.from_columns([net.complex_vector(i) for i in range(net.n)], net.m)
