import pytest
from hypothesis import given, settings, strategies as st

from src.algebra.boolean import BooleanSet, subsets
from src.algebra.dynamics import BdsSpec, CycleStatus, Word, apply_theta, check_condition_L, classify_set, \
    closed_domain, cycle_check, cycle_images, is_locally_finite, normalize_no_exit_cycle, range_set
from src.utils.errors import NotANoExitCycleError, ValidationError
from src.utils.random_specs import all_specs
from tests.oracles import brute_force_condition_L, brute_force_regular, is_no_exit_cycle
from tests.specs import CHAIN, DLOOP, LOOP, SWAP2, TWO_LOOPS
from tests.strategies import boolean_sets, specs, words


class TestBdsSpec:
    def test_from_maps(self):
        assert SWAP2.dual_maps == ((1, 0),)
        assert CHAIN.dual_maps == ((0, None), (1, None))
        assert CHAIN.dual_map('b') == {'x': 'y'}

    def test_unknown_label(self):
        with pytest.raises(ValidationError, match='UNKNOWN'):
            SWAP2.label_index('z')

    @pytest.mark.parametrize('atoms,labels,dual_maps', [
        ((), ('a',), ((),)),
        (('x',), (), ()),
        (('x', 'x'), ('a',), ((0, 0),)),
        (('x',), ('a',), ((1,),)),
        (('x', 'y'), ('a',), ((0,),)),
    ])
    def test_invalid(self, atoms, labels, dual_maps):
        with pytest.raises(ValidationError):
            BdsSpec(atoms, labels, dual_maps)


class TestWord:
    def test_render(self):
        assert str(Word.of('aab')) == 'aab'
        assert str(Word(('ab', 'c'))) == 'ab.c'
        assert str(Word()) == '()'

    def test_prefix_and_power(self):
        w = Word.of('ab')
        assert w.power(2) == Word.of('abab')
        assert w.power(2).prefix(3) == Word.of('aba')
        assert (w + Word.of('c')).reversed() == Word.of('cba')


class TestApplyTheta:
    def test_empty_set(self):
        assert apply_theta(SWAP2, Word.of('aaa'), BooleanSet.empty(2)) == BooleanSet.empty(2)

    def test_loop(self):
        assert apply_theta(LOOP, Word.of('a'), LOOP.set_of('x')) == LOOP.set_of('x')

    def test_swap(self):
        assert apply_theta(SWAP2, Word.of('a'), SWAP2.set_of('x')) == SWAP2.set_of('y')
        assert apply_theta(SWAP2, Word.of('aa'), SWAP2.set_of('x')) == SWAP2.set_of('x')

    def test_empty_word_is_identity(self):
        assert apply_theta(CHAIN, Word(), CHAIN.set_of('y')) == CHAIN.set_of('y')

    def test_unknown_label(self):
        with pytest.raises(ValidationError):
            apply_theta(SWAP2, Word.of('b'), SWAP2.set_of('x'))

    @given(specs(), st.data())
    def test_homomorphism(self, spec, data):
        alpha = data.draw(words(spec, max_size=3))
        a, b = data.draw(boolean_sets(spec)), data.draw(boolean_sets(spec))
        theta = lambda s: apply_theta(spec, alpha, s)
        assert theta(a | b) == theta(a) | theta(b)
        assert theta(a & b) == theta(a) & theta(b)
        assert theta(a - b) == theta(a) - theta(b)

    @given(specs(), st.data())
    def test_composition(self, spec, data):
        alpha, beta = data.draw(words(spec, max_size=3)), data.draw(words(spec, max_size=3))
        a = data.draw(boolean_sets(spec))
        assert apply_theta(spec, alpha + beta, a) == apply_theta(spec, beta, apply_theta(spec, alpha, a))

    @given(specs(), st.data())
    def test_bounded_by_range(self, spec, data):
        alpha = data.draw(words(spec, max_size=3))
        a = data.draw(boolean_sets(spec))
        assert apply_theta(spec, alpha, a) <= range_set(spec, alpha)


class TestRangeSet:
    def test_loop(self):
        assert range_set(LOOP, Word.of('a')) == LOOP.set_of('x')

    def test_chain(self):
        assert range_set(CHAIN, Word.of('b')) == CHAIN.set_of('x')
        assert range_set(CHAIN, Word.of('ba')) == CHAIN.set_of('x')

    def test_empty_word(self):
        assert range_set(CHAIN, Word()) == BooleanSet.unit(2)

    @pytest.mark.parametrize('spec,word', [(LOOP, 'a'), (CHAIN, 'b'), (CHAIN, 'ba'), (TWO_LOOPS, 'b')])
    def test_closed_domain_reaches_range(self, spec, word):
        alpha = Word.of(*word)
        assert apply_theta(spec, alpha, closed_domain(spec, alpha)) == range_set(spec, alpha)


class TestClassifySet:
    def test_empty_set_is_regular(self):
        c = classify_set(CHAIN, BooleanSet.empty(2))
        assert c.delta == ()
        assert c.regular

    def test_loop(self):
        c = classify_set(LOOP, LOOP.set_of('x'))
        assert c.delta == ('a',)
        assert c.lambda_ == 1
        assert c.regular

    def test_chain(self):
        assert classify_set(CHAIN, CHAIN.set_of('y')) == (('b',), 1, True)
        assert classify_set(CHAIN, CHAIN.set_of('x', 'y')).delta == ('a', 'b')

    def test_sink_is_not_regular(self):
        sink = BdsSpec.from_maps('xy', 'a', {'a': {'x': 'y'}})
        assert not classify_set(sink, sink.set_of('x')).regular
        assert not classify_set(sink, sink.set_of('x', 'y')).regular
        assert classify_set(sink, sink.set_of('y')).regular

    @given(specs(), st.data())
    def test_regular_matches_definition(self, spec, data):
        a = data.draw(boolean_sets(spec))
        assert classify_set(spec, a).regular == brute_force_regular(spec, a)

    @pytest.mark.parametrize('spec', [LOOP, SWAP2, CHAIN, TWO_LOOPS])
    def test_locally_finite(self, spec):
        assert is_locally_finite(spec)


class TestCycleCheck:
    def test_loop(self):
        assert cycle_check(LOOP, Word.of('a'), LOOP.set_of('x')).status == CycleStatus.CYCLE_NO_EXIT

    def test_double_loop_has_exit(self):
        witness = cycle_check(DLOOP, Word.of('a'), DLOOP.set_of('x'))
        assert witness.status == CycleStatus.CYCLE_WITH_EXIT
        assert witness.exit.t == 1
        assert witness.exit.b == DLOOP.set_of('x')

    def test_swap(self):
        assert cycle_check(SWAP2, Word.of('a'), SWAP2.set_of('x')).status == CycleStatus.NOT_CYCLE
        assert cycle_check(SWAP2, Word.of('aa'), SWAP2.set_of('x')).status == CycleStatus.CYCLE_NO_EXIT

    @pytest.mark.parametrize('word,members', [('', [0]), ('a', [])])
    def test_empty_inputs(self, word, members):
        with pytest.raises(ValidationError):
            cycle_check(SWAP2, Word.of(*word), BooleanSet.of(2, members))

    @given(specs(max_atoms=3), st.data())
    def test_matches_definition(self, spec, data):
        alpha = data.draw(words(spec, min_size=1, max_size=4))
        a = data.draw(boolean_sets(spec, nonempty=True))
        status = cycle_check(spec, alpha, a).status
        assert (status == CycleStatus.CYCLE_NO_EXIT) == is_no_exit_cycle(spec, alpha, a)


class TestNormalize:
    def test_already_minimal(self):
        assert normalize_no_exit_cycle(LOOP, Word.of('a'), LOOP.set_of('x')) == (Word.of('a'), LOOP.set_of('x'))

    def test_swap(self):
        beta, b = normalize_no_exit_cycle(SWAP2, Word.of('aa'), SWAP2.set_of('x'))
        assert (beta, b) == (Word.of('aa'), SWAP2.set_of('x'))
        assert not b & apply_theta(SWAP2, beta.prefix(1), b)

    def test_shortest_prefix(self):
        assert normalize_no_exit_cycle(SWAP2, Word.of('aaaa'), SWAP2.set_of('x')) == (Word.of('aa'), SWAP2.set_of('x'))

    def test_cycle_images(self):
        assert cycle_images(SWAP2, Word.of('aa'), SWAP2.set_of('x')) == [SWAP2.set_of('y'), SWAP2.set_of('x')]

    def test_rejects_cycle_with_exit(self):
        with pytest.raises(NotANoExitCycleError):
            normalize_no_exit_cycle(DLOOP, Word.of('a'), DLOOP.set_of('x'))

    @given(specs(max_atoms=3), st.data())
    def test_images_disjoint_from_base(self, spec, data):
        alpha = data.draw(words(spec, min_size=1, max_size=4))
        a = data.draw(boolean_sets(spec, nonempty=True))
        if cycle_check(spec, alpha, a).status != CycleStatus.CYCLE_NO_EXIT:
            return
        beta, b = normalize_no_exit_cycle(spec, alpha, a)
        assert len(b) == 1 and b <= a
        assert cycle_check(spec, beta, b).status == CycleStatus.CYCLE_NO_EXIT
        for image in cycle_images(spec, beta, b)[:-1]:
            assert not image & b


class TestConditionL:
    def test_loop(self):
        result = check_condition_L(LOOP)
        assert not result.holds
        assert (result.witness.word, result.witness.base) == (Word.of('a'), LOOP.set_of('x'))

    def test_double_loop(self):
        assert check_condition_L(DLOOP).holds

    def test_chain(self):
        result = check_condition_L(CHAIN)
        assert not result.holds
        assert (result.witness.word, result.witness.base) == (Word.of('a'), CHAIN.set_of('x'))

    def test_witness_is_checked(self):
        result = check_condition_L(SWAP2)
        assert cycle_check(SWAP2, result.witness.word, result.witness.base).status == CycleStatus.CYCLE_NO_EXIT

    def test_exhaustive_three_atoms_two_labels(self):
        for spec in all_specs(3, 2):
            assert check_condition_L(spec).holds == brute_force_condition_L(spec), spec

    @settings(max_examples=50)
    @given(specs(max_atoms=3, min_atoms=3, max_labels=3))
    def test_three_atoms_three_labels(self, spec):
        result = check_condition_L(spec)
        assert result.holds == brute_force_condition_L(spec)
        if not result.holds:
            assert is_no_exit_cycle(spec, result.witness.word, result.witness.base)

    @given(specs(max_atoms=3), st.data())
    def test_no_exit_cycle_on_subsets(self, spec, data):
        a = data.draw(boolean_sets(spec, nonempty=True))
        alpha = data.draw(words(spec, min_size=1, max_size=3))
        if is_no_exit_cycle(spec, alpha, a):
            for b in subsets(a):
                if b:
                    assert is_no_exit_cycle(spec, alpha, b)
