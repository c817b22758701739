"""
Finite Boolean algebras, realized as the powerset of a finite set of atoms.

Every element is a BooleanSet of atom indices, every ideal is generated by a
single element and every ultrafilter is principal, so the whole Stone duality
collapses to bookkeeping on atom indices.
"""
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from src.utils.errors import UniverseMismatchError, ValidationError


@dataclass(frozen=True)
class Atom:
    id: str
    index: int

    def __str__(self):
        return self.id


@dataclass(frozen=True)
class BooleanSet:
    members: frozenset
    size: int  # atom count of the universe this element lives in

    def __post_init__(self):
        bad = [m for m in self.members if not 0 <= m < self.size]
        if bad:
            raise ValidationError(f'Atom indices {sorted(bad)} outside universe of {self.size} atoms')

    @classmethod
    def of(cls, size: int, indices: Iterable[int] = ()) -> 'BooleanSet':
        return cls(frozenset(indices), size)

    @classmethod
    def empty(cls, size: int) -> 'BooleanSet':
        return cls(frozenset(), size)

    @classmethod
    def unit(cls, size: int) -> 'BooleanSet':
        return cls(frozenset(range(size)), size)

    def _check(self, other: 'BooleanSet'):
        if not isinstance(other, BooleanSet):
            raise TypeError(f'Expected BooleanSet, got {type(other).__name__}')
        if other.size != self.size:
            raise UniverseMismatchError(f'Universe mismatch: {self.size} atoms vs {other.size} atoms')

    def __or__(self, other):
        self._check(other)
        return BooleanSet(self.members | other.members, self.size)

    def __and__(self, other):
        self._check(other)
        return BooleanSet(self.members & other.members, self.size)

    def __sub__(self, other):
        self._check(other)
        return BooleanSet(self.members - other.members, self.size)

    def __le__(self, other):
        self._check(other)
        return self.members <= other.members

    def __lt__(self, other):
        self._check(other)
        return self.members < other.members

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __bool__(self):
        return bool(self.members)

    def __contains__(self, index):
        return index in self.members

    def complement(self) -> 'BooleanSet':
        return BooleanSet(frozenset(range(self.size)) - self.members, self.size)

    @property
    def sort_key(self):
        return len(self.members), tuple(sorted(self.members))

    def canonical(self) -> tuple:
        return tuple(sorted(self.members))

    def render(self, atom_ids) -> str:
        return '{' + ','.join(atom_ids[i] for i in self) + '}'


class AlgebraOps(NamedTuple):
    union: BooleanSet
    intersection: BooleanSet
    relative_complement: BooleanSet
    leq: bool


def algebra_ops(a: BooleanSet, b: BooleanSet) -> AlgebraOps:
    intersection = a & b
    return AlgebraOps(union=a | b, intersection=intersection,
                      relative_complement=a - b, leq=intersection == a)


def subsets(a: BooleanSet) -> Iterator[BooleanSet]:
    """ Every element below `a`, smallest first. """
    members = sorted(a.members)
    for r in range(len(members) + 1):
        for combo in itertools.combinations(members, r):
            yield BooleanSet(frozenset(combo), a.size)


def all_sets(size: int) -> Iterator[BooleanSet]:
    return subsets(BooleanSet.unit(size))


@dataclass(frozen=True)
class AlgebraIdeal:
    """ The principal ideal I_A = {B : B <= A}. """
    down_set_generator: BooleanSet

    def __contains__(self, b: BooleanSet):
        return b <= self.down_set_generator

    def elements(self) -> list:
        return list(subsets(self.down_set_generator))

    def __len__(self):
        return 2 ** len(self.down_set_generator)


def generated_ideal(a: BooleanSet) -> AlgebraIdeal:
    return AlgebraIdeal(a)


@dataclass(frozen=True)
class Ultrafilter:
    principal_atom: Atom

    def __contains__(self, a: BooleanSet):
        return self.principal_atom.index in a

    def __str__(self):
        return f'{self.principal_atom.id}^'


class UltrafilterSpace(list):
    """ The (discrete) Stone space of a finite algebra, in atom order. """

    def cylinder(self, a: BooleanSet) -> list:
        return [xi for xi in self if a in xi]


def enumerate_ultrafilters(spec) -> UltrafilterSpace:
    return UltrafilterSpace(Ultrafilter(atom) for atom in spec.atom_objects)


def is_filter(family: set, size: int) -> bool:
    """ Literal filter axioms on a family of elements: nonempty, no empty set,
    closed under intersection and upwards closed. """
    if not family or BooleanSet.empty(size) in family:
        return False
    for a, b in itertools.product(family, repeat=2):
        if a & b not in family:
            return False
    for a in family:
        for b in all_sets(size):
            if a <= b and b not in family:
                return False
    return True


def is_ultrafilter(family: set, size: int) -> bool:
    """ A filter that is prime: whenever A = B u B' is in it, B or B' is too. """
    if not is_filter(family, size):
        return False
    for a in family:
        for b in subsets(a):
            if b not in family and a - b not in family:
                return False
    return True


def quotient_class(a: BooleanSet, h: BooleanSet) -> BooleanSet:
    """ Canonical representative of [A] in B/I_H. """
    return a - h
