"""
Boolean dynamical systems on a finite powerset algebra.

A system is given by its dual maps: one partial function on atoms per label.
The action of a label is the preimage map of its dual map,

    theta_l(A) = {u : dual_map(l)(u) is defined and lies in A}

and a word acts letter by letter, first letter first, so that
theta_(a1...an) = theta_an o ... o theta_a1. Its dual map is therefore the
composite dual_map(a1) o ... o dual_map(an), applied rightmost letter first.

Worked trace on SWAP2 (a: x->y, y->x):
    theta_a({x}) = {u : a(u) = x} = {y}
    theta_aa({x}) = theta_a(theta_a({x})) = theta_a({y}) = {x}
"""
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import NamedTuple, Optional

from src.algebra.boolean import Atom, BooleanSet
from src.utils.errors import NotANoExitCycleError, ValidationError


@dataclass(frozen=True)
class BdsSpec:
    atoms: tuple       # atom ids, canonical order
    labels: tuple      # label ids, canonical order
    dual_maps: tuple   # dual_maps[label_index][atom_index] -> atom index or None

    def __post_init__(self):
        if not self.atoms:
            raise ValidationError('A system needs at least one atom')
        if not self.labels:
            raise ValidationError('A system needs at least one label')
        if len(set(self.atoms)) != len(self.atoms):
            raise ValidationError(f'Duplicate atom ids in {list(self.atoms)}')
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError(f'Duplicate label ids in {list(self.labels)}')
        if len(self.dual_maps) != len(self.labels):
            raise ValidationError(f'{len(self.dual_maps)} dual maps for {len(self.labels)} labels')
        for label, images in zip(self.labels, self.dual_maps):
            if len(images) != len(self.atoms):
                raise ValidationError(f'Dual map of label "{label}" has {len(images)} entries, expected {len(self.atoms)}')
            for image in images:
                if image is not None and not 0 <= image < len(self.atoms):
                    raise ValidationError(f'Dual map of label "{label}" points outside the atoms: {image}')

    @classmethod
    def from_maps(cls, atoms, labels, maps: dict) -> 'BdsSpec':
        """ Build from id-keyed maps, eg. from_maps('xy', 'a', {'a': {'x': 'y', 'y': 'x'}}) """
        atoms, labels = tuple(atoms), tuple(labels)
        index = {atom: i for i, atom in enumerate(atoms)}
        dual_maps = []
        for label in labels:
            mapping = maps.get(label, {})
            images = [None] * len(atoms)
            for source, target in mapping.items():
                images[index[source]] = index[target]
            dual_maps.append(tuple(images))
        return cls(atoms, labels, tuple(dual_maps))

    @property
    def size(self) -> int:
        return len(self.atoms)

    @cached_property
    def atom_objects(self) -> tuple:
        return tuple(Atom(atom_id, i) for i, atom_id in enumerate(self.atoms))

    @cached_property
    def _atom_index(self) -> dict:
        return {atom_id: i for i, atom_id in enumerate(self.atoms)}

    @cached_property
    def _label_index(self) -> dict:
        return {label: i for i, label in enumerate(self.labels)}

    def atom_index(self, atom_id: str) -> int:
        if atom_id not in self._atom_index:
            raise ValidationError(f'Atom "{atom_id}" UNKNOWN')
        return self._atom_index[atom_id]

    def label_index(self, label: str) -> int:
        if label not in self._label_index:
            raise ValidationError(f'Label "{label}" UNKNOWN')
        return self._label_index[label]

    def dual_map(self, label: str) -> dict:
        images = self.dual_maps[self.label_index(label)]
        return {self.atoms[u]: self.atoms[v] for u, v in enumerate(images) if v is not None}

    @cached_property
    def preimages(self) -> tuple:
        """ preimages[label_index][atom_index] = frozenset of atoms mapped onto it """
        table = []
        for images in self.dual_maps:
            row = [set() for _ in self.atoms]
            for u, v in enumerate(images):
                if v is not None:
                    row[v].add(u)
            table.append(tuple(frozenset(r) for r in row))
        return tuple(table)

    @cached_property
    def atom_delta(self) -> tuple:
        """ atom_delta[u] = labels (in label order) whose action does not kill {u} """
        return tuple(tuple(label for l, label in enumerate(self.labels) if self.preimages[l][u])
                     for u in range(self.size))

    def set_of(self, *atom_ids) -> BooleanSet:
        return BooleanSet.of(self.size, (self.atom_index(a) for a in atom_ids))

    def render(self, a: BooleanSet) -> str:
        return a.render(self.atoms)


@dataclass(frozen=True)
class Word:
    letters: tuple = ()

    @classmethod
    def of(cls, *letters) -> 'Word':
        """ Word.of('a', 'b') or Word.of('ab') for single character labels """
        if len(letters) == 1 and isinstance(letters[0], str) and len(letters[0]) > 1:
            letters = tuple(letters[0])
        return cls(tuple(letters))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, item):
        return self.letters[item]

    def __add__(self, other: 'Word') -> 'Word':
        return Word(self.letters + other.letters)

    def prefix(self, t: int) -> 'Word':
        """ alpha_[1,t] """
        return Word(self.letters[:t])

    def power(self, k: int) -> 'Word':
        return Word(self.letters * k)

    def reversed(self) -> 'Word':
        return Word(self.letters[::-1])

    def __str__(self):
        if not self.letters:
            return '()'
        sep = '' if all(len(l) == 1 for l in self.letters) else '.'
        return sep.join(self.letters)


def check_word(spec: BdsSpec, alpha: Word) -> tuple:
    return tuple(spec.label_index(l) for l in alpha)


def apply_theta(spec: BdsSpec, alpha: Word, a: BooleanSet) -> BooleanSet:
    members = a.members
    for l in check_word(spec, alpha):
        preimages = spec.preimages[l]
        members = frozenset(u for v in members for u in preimages[v])
    return BooleanSet(members, spec.size)


def range_set(spec: BdsSpec, alpha: Word) -> BooleanSet:
    """ R_alpha, the least upper bound of theta_alpha(B). The unit is a closed-domain witness. """
    return apply_theta(spec, alpha, BooleanSet.unit(spec.size))


def closed_domain(spec: BdsSpec, alpha: Word) -> BooleanSet:
    return BooleanSet.unit(spec.size)


class SetClassification(NamedTuple):
    delta: tuple
    lambda_: int
    regular: bool


def delta(spec: BdsSpec, a: BooleanSet) -> tuple:
    hit = set()
    for u in a:
        hit.update(spec.atom_delta[u])
    return tuple(l for l in spec.labels if l in hit)


def classify_set(spec: BdsSpec, a: BooleanSet) -> SetClassification:
    d = delta(spec, a)
    # Delta_B is the union of the atom Deltas, so one atom with an empty Delta is enough
    regular = all(spec.atom_delta[u] for u in a)
    return SetClassification(delta=d, lambda_=len(d), regular=regular)


def is_locally_finite(spec: BdsSpec) -> bool:
    for u in range(spec.size):
        witness = BooleanSet.of(spec.size, [u])
        if not classify_set(spec, witness).lambda_ < math.inf:
            return False
    return True


class CycleStatus(str, Enum):
    NOT_CYCLE = 'not_cycle'
    CYCLE_WITH_EXIT = 'cycle_with_exit'
    CYCLE_NO_EXIT = 'cycle_no_exit'


class CycleExit(NamedTuple):
    t: int
    b: BooleanSet


@dataclass(frozen=True)
class CycleWitness:
    word: Word
    base: BooleanSet
    status: CycleStatus
    exit: Optional[CycleExit] = None


def cycle_check(spec: BdsSpec, alpha: Word, a: BooleanSet) -> CycleWitness:
    if not len(alpha) or not a:
        raise ValidationError('A cycle needs a nonempty word and a nonempty base set')
    for u in a:
        single = BooleanSet.of(spec.size, [u])
        if apply_theta(spec, alpha, single) != single:
            return CycleWitness(alpha, a, CycleStatus.NOT_CYCLE)

    n = len(alpha)
    for t in range(1, n + 1):
        forced = alpha[t % n]  # alpha_{|alpha|+1} wraps to alpha_1
        for v in apply_theta(spec, alpha.prefix(t), a):
            if spec.atom_delta[v] != (forced,):
                return CycleWitness(alpha, a, CycleStatus.CYCLE_WITH_EXIT,
                                    CycleExit(t, BooleanSet.of(spec.size, [v])))
    return CycleWitness(alpha, a, CycleStatus.CYCLE_NO_EXIT)


def normalize_no_exit_cycle(spec: BdsSpec, alpha: Word, a: BooleanSet) -> tuple:
    """ Shrink a cycle without exits to (beta, B), beta the shortest prefix of alpha
    that fixes some atom of A, so that B and theta_beta[1,k](B) are disjoint for k < |beta|.
    """
    if cycle_check(spec, alpha, a).status != CycleStatus.CYCLE_NO_EXIT:
        raise NotANoExitCycleError(f'({alpha}, {spec.render(a)}) is not a cycle without exits')
    for j in range(1, len(alpha) + 1):
        beta = alpha.prefix(j)
        for u in a:
            single = BooleanSet.of(spec.size, [u])
            if apply_theta(spec, beta, single) == single:
                return beta, single
    raise AssertionError('unreachable: alpha itself fixes every atom of A')


def cycle_images(spec: BdsSpec, beta: Word, b: BooleanSet) -> list:
    """ [theta_beta[1,k](B) for k = 1..|beta|] """
    return [apply_theta(spec, beta.prefix(k), b) for k in range(1, len(beta) + 1)]


class ConditionL(NamedTuple):
    holds: bool
    witness: Optional[CycleWitness]


def find_no_exit_cycle_at(spec: BdsSpec, x: int) -> Optional[Word]:
    """ Run the forced simulation from {x}: every atom of the current set must have the
    same singleton Delta, which fixes the next letter. Returns the word when {x} recurs.
    """
    start = frozenset([x])
    state = start
    seen = {state}
    letters = []
    for _ in range(2 ** spec.size):
        deltas = {spec.atom_delta[v] for v in state}
        if len(deltas) != 1:
            return None
        d = deltas.pop()
        if len(d) != 1:
            return None
        letter = d[0]
        letters.append(letter)
        preimages = spec.preimages[spec.label_index(letter)]
        state = frozenset(u for v in state for u in preimages[v])
        if not state:
            return None
        if state == start:
            return Word(tuple(letters))
        if state in seen:
            return None
        seen.add(state)
    return None


def check_condition_L(spec: BdsSpec) -> ConditionL:
    for x in range(spec.size):
        word = find_no_exit_cycle_at(spec, x)
        if word is not None:
            base = BooleanSet.of(spec.size, [x])
            return ConditionL(False, CycleWitness(word, base, CycleStatus.CYCLE_NO_EXIT))
    return ConditionL(True, None)
