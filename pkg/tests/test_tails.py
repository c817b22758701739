import itertools

import pytest
from hypothesis import given, strategies as st

from src.algebra.boolean import BooleanSet, all_sets
from src.algebra.dynamics import BdsSpec, Word, apply_theta, check_condition_L
from src.algebra.stone_dual import reach
from src.ideals.tails import HsIdeal, dominates, enumerate_hs_ideals, enumerate_maximal_tails, hereditary_closure, \
    is_cyclic_tail, is_hereditary, is_maximal_tail, is_saturated, lift, quotient_bds, quotient_fails_L, \
    saturation_closure, tail_from_ultrafilter_cycle
from src.utils.errors import NotACyclicWitnessError, SizeLimitError, ValidationError
from src.utils.random_specs import atom_ids
from tests.specs import CHAIN, DLOOP, LOOP, SWAP2, TWO_LOOPS
from tests.strategies import boolean_sets, specs


def supports(ideals_or_tails, attr):
    return [getattr(item, attr).canonical() for item in ideals_or_tails]


class TestHereditarySaturated:
    def test_hereditary(self):
        assert is_hereditary(CHAIN, BooleanSet.empty(2))
        assert not is_hereditary(CHAIN, CHAIN.set_of('y'))
        assert is_hereditary(CHAIN, CHAIN.set_of('x', 'y'))

    def test_saturated(self):
        assert is_saturated(LOOP, BooleanSet.empty(1))
        assert not is_saturated(CHAIN, CHAIN.set_of('x'))
        for spec in (LOOP, SWAP2, CHAIN, TWO_LOOPS):
            assert is_saturated(spec, BooleanSet.unit(spec.size))

    def test_singular_atom_never_forced(self):
        sink = BdsSpec.from_maps('xy', 'a', {'a': {'x': 'y'}})
        assert is_saturated(sink, BooleanSet.empty(2))
        assert is_hereditary(sink, sink.set_of('x'))

    @given(specs(), st.data())
    def test_hereditary_matches_theta(self, spec, data):
        h = data.draw(boolean_sets(spec))
        closed = all(apply_theta(spec, Word((l,)), h) <= h for l in spec.labels)
        assert is_hereditary(spec, h) == closed


class TestSaturationClosure:
    def test_empty(self):
        assert saturation_closure(CHAIN, BooleanSet.empty(2)).atom_set == BooleanSet.empty(2)

    def test_chain(self):
        closure = saturation_closure(CHAIN, CHAIN.set_of('x'))
        assert closure.atom_set == CHAIN.set_of('x', 'y')
        assert not closure.proper

    def test_swap(self):
        assert saturation_closure(SWAP2, SWAP2.set_of('x')).atom_set == SWAP2.set_of('x', 'y')

    def test_hereditary_closure_follows_theta(self):
        assert hereditary_closure(CHAIN, CHAIN.set_of('y')) == CHAIN.set_of('x', 'y')

    @given(specs(), st.data())
    def test_closure_operator(self, spec, data):
        s, t = data.draw(boolean_sets(spec)), data.draw(boolean_sets(spec))
        closure = lambda a: saturation_closure(spec, a).atom_set
        h = closure(s)
        assert s <= h
        assert closure(h) == h
        assert closure(s & t) <= closure(s)
        assert is_hereditary(spec, h) and is_saturated(spec, h)

    @given(specs(), st.data())
    def test_least_hs_ideal(self, spec, data):
        s = data.draw(boolean_sets(spec))
        h = saturation_closure(spec, s).atom_set
        for ideal in enumerate_hs_ideals(spec):
            if s <= ideal.atom_set:
                assert h <= ideal.atom_set


class TestEnumerateHsIdeals:
    @pytest.mark.parametrize('spec,expected', [
        (LOOP, [(), (0,)]),
        (SWAP2, [(), (0, 1)]),
        (CHAIN, [(), (0, 1)]),
        (TWO_LOOPS, [(), (0,), (1,), (0, 1)]),
    ])
    def test_fixtures(self, spec, expected):
        ideals = enumerate_hs_ideals(spec)
        assert supports(ideals, 'atom_set') == expected
        assert [ideal.proper for ideal in ideals] == [True] * (len(expected) - 1) + [False]

    def test_size_limit(self):
        n = 21
        spec = BdsSpec(atom_ids(n), ('a',), (tuple(range(n)),))
        with pytest.raises(SizeLimitError):
            enumerate_hs_ideals(spec)

    @given(specs())
    def test_matches_subset_scan(self, spec):
        found = {ideal.atom_set for ideal in enumerate_hs_ideals(spec)}
        scanned = {h for h in all_sets(spec.size) if is_hereditary(spec, h) and is_saturated(spec, h)}
        assert found == scanned

    @given(specs())
    def test_closed_under_meet_and_join(self, spec):
        ideals = {ideal.atom_set for ideal in enumerate_hs_ideals(spec)}
        for h1, h2 in itertools.product(ideals, repeat=2):
            assert h1 & h2 in ideals
            assert saturation_closure(spec, h1 | h2).atom_set in ideals


class TestQuotient:
    def test_by_zero(self):
        assert quotient_bds(CHAIN, BooleanSet.empty(2)) == CHAIN

    def test_restricts_to_complement(self):
        quotient = quotient_bds(TWO_LOOPS, HsIdeal(TWO_LOOPS.set_of('x'), True))
        assert quotient.atoms == ('y',)
        assert quotient.dual_maps == ((None,), (0,))
        assert lift(TWO_LOOPS, quotient, BooleanSet.unit(1)) == TWO_LOOPS.set_of('y')

    def test_rejects_improper(self):
        with pytest.raises(ValidationError):
            quotient_bds(LOOP, LOOP.set_of('x'))

    def test_rejects_non_hereditary(self):
        with pytest.raises(ValidationError):
            quotient_bds(CHAIN, CHAIN.set_of('y'))

    def test_chain_quotient_fails_L(self):
        assert quotient_fails_L(CHAIN, BooleanSet.empty(2))
        assert not quotient_fails_L(DLOOP, BooleanSet.empty(1))

    @given(specs(), st.data())
    def test_class_map_intertwines(self, spec, data):
        proper = [ideal for ideal in enumerate_hs_ideals(spec) if ideal.proper]
        ideal = data.draw(st.sampled_from(proper))
        quotient = quotient_bds(spec, ideal)
        a = data.draw(boolean_sets(spec))
        keep = sorted(ideal.atom_set.complement().members)
        project = lambda s: BooleanSet.of(quotient.size, (keep.index(u) for u in s if u in keep))
        for label in spec.labels:
            letter = Word((label,))
            assert project(apply_theta(spec, letter, a)) == apply_theta(quotient, letter, project(a))


class TestMaximalTails:
    def test_is_maximal_tail(self):
        assert is_maximal_tail(LOOP, LOOP.set_of('x'))
        assert is_maximal_tail(CHAIN, CHAIN.set_of('x', 'y'))
        assert not is_maximal_tail(CHAIN, CHAIN.set_of('y'))
        assert not is_maximal_tail(CHAIN, BooleanSet.empty(2))

    def test_needs_common_ancestor(self):
        assert not is_maximal_tail(TWO_LOOPS, TWO_LOOPS.set_of('x', 'y'))

    def test_loop(self):
        (tail,) = enumerate_maximal_tails(LOOP)
        assert tail.support == LOOP.set_of('x')
        assert tail.cyclic
        assert tail.cyclic_witness.word == Word.of('a')

    def test_double_loop(self):
        (tail,) = enumerate_maximal_tails(DLOOP)
        assert not tail.cyclic

    def test_swap(self):
        (tail,) = enumerate_maximal_tails(SWAP2)
        assert tail.support == SWAP2.set_of('x', 'y')
        witness = tail.cyclic_witness
        assert (witness.word, str(witness.atom), witness.base) == (Word.of('aa'), 'x', SWAP2.set_of('x'))

    def test_chain(self):
        (tail,) = enumerate_maximal_tails(CHAIN)
        assert tail.support == CHAIN.set_of('x', 'y')
        assert (tail.cyclic_witness.word, str(tail.cyclic_witness.atom)) == (Word.of('a'), 'x')
        assert CHAIN.set_of('y') in tail
        assert BooleanSet.empty(2) not in tail

    def test_two_loops(self):
        tails = enumerate_maximal_tails(TWO_LOOPS)
        assert supports(tails, 'support') == [(0,), (1,)]
        assert all(tail.cyclic for tail in tails)

    def test_cyclic_tail_requires_tail(self):
        with pytest.raises(ValidationError):
            is_cyclic_tail(CHAIN, CHAIN.set_of('y'))

    def test_is_cyclic_tail(self):
        assert is_cyclic_tail(LOOP, LOOP.set_of('x')).base == LOOP.set_of('x')
        assert is_cyclic_tail(DLOOP, DLOOP.set_of('x')) is None
        assert is_cyclic_tail(SWAP2, SWAP2.set_of('x', 'y')).word == Word.of('aa')

    @given(specs())
    def test_complements_are_hs_ideals(self, spec):
        for tail in enumerate_maximal_tails(spec):
            assert is_hereditary(spec, tail.complement)
            assert is_saturated(spec, tail.complement)
            assert is_maximal_tail(spec, tail.support)

    @given(specs(), st.data())
    def test_tail_axioms(self, spec, data):
        tails = enumerate_maximal_tails(spec)
        if not tails:
            return
        tail = data.draw(st.sampled_from(tails))
        a, b = data.draw(boolean_sets(spec)), data.draw(boolean_sets(spec))
        assert ((a | b) in tail) == (a in tail or b in tail)
        if a in tail and b in tail:
            w1, w2 = min((a & tail.support).members), min((b & tail.support).members)
            c = next(u for u in tail.support if {w1, w2} <= reach(spec, u).members)
            c = BooleanSet.of(spec.size, [c])
            assert c in tail
            assert dominates(spec, a, c) and dominates(spec, b, c)
        for label in spec.labels:
            # T1: theta_l(A) in T forces A in T
            if apply_theta(spec, Word((label,)), a) in tail:
                assert a in tail


class TestDominates:
    def test_chain(self):
        # CHAIN: x -b-> y in the dual graph
        assert dominates(CHAIN, CHAIN.set_of('y'), CHAIN.set_of('x'))
        assert not dominates(CHAIN, CHAIN.set_of('x'), CHAIN.set_of('y'))

    @given(specs(), st.data())
    def test_atoms_follow_dual_paths(self, spec, data):
        u = data.draw(st.integers(0, spec.size - 1))
        v = data.draw(st.integers(0, spec.size - 1))
        on_path = v in reach(spec, u)
        assert dominates(spec, BooleanSet.of(spec.size, [v]), BooleanSet.of(spec.size, [u])) == on_path


class TestTailFromCycle:
    def test_loop(self):
        assert tail_from_ultrafilter_cycle(LOOP, Word.of('a'), 0).support == LOOP.set_of('x')

    def test_swap(self):
        assert tail_from_ultrafilter_cycle(SWAP2, Word.of('aa'), 0).support == SWAP2.set_of('x', 'y')
        assert tail_from_ultrafilter_cycle(SWAP2, Word.of('aaaa'), 0).support == SWAP2.set_of('x', 'y')

    def test_chain(self):
        tail = tail_from_ultrafilter_cycle(CHAIN, Word.of('a'), 0)
        assert tail.support == CHAIN.set_of('x', 'y')
        assert quotient_fails_L(CHAIN, tail.complement)

    def test_not_a_cycle(self):
        with pytest.raises(NotACyclicWitnessError):
            tail_from_ultrafilter_cycle(SWAP2, Word.of('a'), 0)

    def test_not_single_power(self):
        with pytest.raises(NotACyclicWitnessError):
            tail_from_ultrafilter_cycle(DLOOP, Word.of('a'), 0)

    @given(specs(max_atoms=3))
    def test_round_trip(self, spec):
        for tail in enumerate_maximal_tails(spec):
            if not tail.cyclic:
                continue
            witness = tail.cyclic_witness
            rebuilt = tail_from_ultrafilter_cycle(spec, witness.word, witness.atom)
            assert rebuilt.support == tail.support
            assert is_maximal_tail(spec, rebuilt.support)
            assert not check_condition_L(quotient_bds(spec, tail.complement)).holds

    @given(specs(max_atoms=3))
    def test_converse(self, spec):
        cyclic = [tail for tail in enumerate_maximal_tails(spec) if tail.cyclic]
        for ideal in enumerate_hs_ideals(spec):
            if ideal.proper and quotient_fails_L(spec, ideal.atom_set):
                assert any(not tail.support & ideal.atom_set for tail in cyclic)
