"""
Condition (K) deciders.

decide_k_direct looks for an atom whose closed-walk language is the powers of a
single word. decide_k_via_quotients runs the Condition (L) decider on every
proper quotient. The two never share code past the dynamics layer, so the CLI
and the test suite use each as the oracle of the other.
"""
import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from src.algebra.boolean import Atom, BooleanSet
from src.algebra.dynamics import BdsSpec, CycleStatus, Word, cycle_check, cycle_images, normalize_no_exit_cycle, \
    check_condition_L
from src.algebra.stone_dual import dual_graph, dual_step, reach, return_language_single_power
from src.ideals.tails import enumerate_hs_ideals, enumerate_maximal_tails, lift, quotient_bds, \
    tail_from_ultrafilter_cycle
from src.utils.errors import DisagreementError

NOT_COMPUTED = 'implied by theory, not computed'


class KWitness(NamedTuple):
    word: Word
    atom: Atom
    base: BooleanSet
    tail_support: BooleanSet
    corner_n: int


@dataclass(frozen=True)
class KVerdict:
    satisfied: bool
    witness: Optional[KWitness]
    method: str  # direct | via_quotients
    annotations: tuple = field(default=())


class CornerObstruction(NamedTuple):
    tail_support: BooleanSet
    b: BooleanSet
    n: int


def _check_disjoint(spec: BdsSpec, beta: Word, images: list):
    for (i, a), (j, b) in itertools.combinations(enumerate(images, 1), 2):
        if a & b:
            raise DisagreementError(f'theta_{beta.prefix(i)} and theta_{beta.prefix(j)} images overlap '
                                    f'on {spec.render(a & b)}')


def corner_of(spec: BdsSpec, support: BooleanSet, word: Word, atom: Atom) -> CornerObstruction:
    """ Normalize (word, {atom}) in the quotient by the tail's complement and
    collect B = theta_beta[1,1](B0) u ... u theta_beta(B0) """
    quotient = quotient_bds(spec, support.complement())
    x = quotient.atom_index(atom.id)
    base = BooleanSet.of(quotient.size, [x])
    if cycle_check(quotient, word, base).status != CycleStatus.CYCLE_NO_EXIT:
        raise DisagreementError(f'({word}, {{{atom}}}) is not a cycle without exits in the quotient by '
                                f'{spec.render(support.complement())}')
    beta, b0 = normalize_no_exit_cycle(quotient, word, base)
    images = cycle_images(quotient, beta, b0)
    _check_disjoint(quotient, beta, images)
    b = BooleanSet.empty(quotient.size)
    for image in images:
        b = b | image
    return CornerObstruction(support, lift(spec, quotient, b), len(beta))


def annotations(satisfied: bool, corner_sizes=()) -> tuple:
    if satisfied:
        notes = ['every ideal of C*(B,L,theta) is gauge-invariant',
                 'C*(B,L,theta) has the ideal property and the weak ideal property',
                 'C*(B,L,theta) has topological dimension zero',
                 'no quotient of C*(B,L,theta) has a corner M_n(C(T))']
    else:
        notes = ['C*(B,L,theta) has a non gauge-invariant ideal',
                 'C*(B,L,theta) has neither real rank zero nor is purely infinite']
        notes += [f'corner M_{n}(C(T)) in a quotient' for n in sorted(set(corner_sizes))]
    return tuple(f'{note} ({NOT_COMPUTED})' for note in notes)


def decide_k_direct(spec: BdsSpec) -> KVerdict:
    for u in range(spec.size):
        verdict = return_language_single_power(spec, u)
        if verdict.single_power is None:
            continue
        tail = tail_from_ultrafilter_cycle(spec, verdict.single_power, u)
        corner = corner_of(spec, tail.support, verdict.single_power, verdict.atom)
        witness = KWitness(verdict.single_power, verdict.atom, BooleanSet.of(spec.size, [u]), tail.support, corner.n)
        return KVerdict(False, witness, 'direct', annotations(False, [corner.n]))
    return KVerdict(True, None, 'direct', annotations(True))


def decide_k_via_quotients(spec: BdsSpec) -> KVerdict:
    for ideal in enumerate_hs_ideals(spec):
        if not ideal.proper:
            continue
        quotient = quotient_bds(spec, ideal)
        result = check_condition_L(quotient)
        if result.holds:
            continue
        word = result.witness.word
        base = lift(spec, quotient, result.witness.base)
        (u,) = base
        beta, _ = normalize_no_exit_cycle(quotient, word, result.witness.base)
        witness = KWitness(word, spec.atom_objects[u], base, reach(spec, u), len(beta))
        return KVerdict(False, witness, 'via_quotients', annotations(False, [len(beta)]))
    return KVerdict(True, None, 'via_quotients', annotations(True))


def decide_strong_k(spec: BdsSpec) -> bool:
    """ Every atom fixed by some word is also fixed by a word outside that word's powers """
    for u in range(spec.size):
        verdict = return_language_single_power(spec, u)
        if verdict.has_return and verdict.single_power is not None:
            return False
    return True


def _is_power_of(beta: Word, alpha: Word) -> bool:
    n, m = len(beta), len(alpha)
    return n > 0 and n % m == 0 and beta.letters == alpha.letters * (n // m)


def closed_walk_words(spec: BdsSpec, u: int, max_len: int) -> list:
    """ every word alpha with |alpha| <= max_len and dual_step(alpha, u) = u """
    graph = dual_graph(spec)
    words = []
    stack = [(u, ())]
    while stack:
        v, walk = stack.pop()
        if walk and v == u:
            words.append(Word(walk[::-1]))
        if len(walk) < max_len:
            for label, target in graph.out_edges(v):
                stack.append((target, walk + (label,)))
    return sorted(words, key=lambda w: (len(w), w.letters))


def lemma_strong_k_literal(spec: BdsSpec, max_len: int = None) -> bool:
    """ Bounded literal check: for every atom u and every word alpha with |alpha| <= atom count
    fixing u, some word beta with |beta| <= max_len fixes u without being a power of alpha.
    The default max_len = n(n+1) reaches an escaping word whenever one exists. """
    n = spec.size
    max_len = n * (n + 1) if max_len is None else max_len
    for u in range(n):
        words = closed_walk_words(spec, u, max_len)
        for alpha in words:
            if len(alpha) > n:
                break
            assert dual_step(spec, alpha, u) == u
            if all(_is_power_of(beta, alpha) for beta in words):
                return False
    return True


def corner_obstructions(spec: BdsSpec) -> list:
    obstructions = []
    for tail in enumerate_maximal_tails(spec):
        if tail.cyclic:
            witness = tail.cyclic_witness
            obstructions.append(corner_of(spec, tail.support, witness.word, witness.atom))
    return obstructions
