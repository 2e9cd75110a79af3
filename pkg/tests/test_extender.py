import dataclasses
import random

import pytest

from linclass import extender
from linclass.canon import are_isometric, canonical_form
from linclass.code import LinearCode, from_generator_matrix, residual_subcode, weight_enumerator
from linclass.extender import (
    EnvelopeViolation,
    ExtensionProblem,
    build_constraints,
    enumerate_solutions,
    extend,
    lexicographic_filter,
    solutions_to_codes,
)
from linclass.galois import point_index
from linclass.weights import WeightSet
from oracles import row_append_children

W46 = WeightSet.explicit([4, 6])
G4 = [[1, 0, 1, 1, 1, 1, 1], [0, 1, 0, 0, 1, 1, 1]]


def classes(codes):
    return {canonical_form(c) for c in codes}


def test_worked_example_system():
    system = build_constraints(ExtensionProblem(LinearCode.from_mult(2, 1, {0: 6}), 1, W46))
    # new point plus the two lifts of the single parent point
    assert len(system.points) == 3
    assert sorted(t for _, t in system.fibers) == [1, 6]
    assert system.targets == (1, 3)
    sols, complete = enumerate_solutions(system)
    assert complete and len(sols) == 1
    assert system.is_solution(sols[0].x)
    assert sorted(sols[0].x) == [1, 3, 3]


def test_worked_example_unique_child():
    children, complete = extend(ExtensionProblem(LinearCode.from_mult(2, 1, {0: 6}), 1, W46))
    assert complete and len(children) == 1
    assert are_isometric(children[0], from_generator_matrix(G4, 2))
    assert weight_enumerator(children[0]).coeffs == (1, 0, 0, 0, 2, 0, 1, 0)


def test_short_parent_needs_unfiltered_search():
    parent = LinearCode.from_mult(2, 1, {0: 4})
    assert extend(ExtensionProblem(parent, 3, W46)) == ([], True)
    loose, complete = extend(ExtensionProblem(parent, 3, W46, canonical=False, lexicographic=False))
    assert complete
    assert any(are_isometric(c, from_generator_matrix(G4, 2)) for c in loose)


def test_parent_outside_envelope_is_rejected():
    with pytest.raises(EnvelopeViolation):
        build_constraints(ExtensionProblem(LinearCode.from_mult(2, 1, {0: 5}), 1, W46))
    with pytest.raises(ValueError):
        ExtensionProblem(LinearCode.from_mult(2, 1, {0: 4}), 0, W46)


def _random_parents(rng, q, k, count, n_max):
    out = []
    from linclass.galois import points_array

    pts = points_array(q, k)
    while len(out) < count:
        n = rng.randint(k, n_max)
        cols = [rng.randrange(len(pts)) for _ in range(n)]
        try:
            out.append(from_generator_matrix(pts[cols].T, q))
        except ValueError:
            continue
    return out


@pytest.mark.parametrize("q,k,seed", [(2, 1, 0), (2, 2, 1), (2, 3, 2), (3, 1, 3), (3, 2, 4), (4, 2, 5)])
def test_unfiltered_extension_matches_row_append_oracle(q, k, seed):
    rng = random.Random(seed)
    for parent in _random_parents(rng, q, k, 4, 6 if q == 2 else 4):
        weights = weight_enumerator(parent).weights()
        top = parent.n + 3
        ws = WeightSet.min_distance(min(weights), top)
        for r in (1, 2):
            got, complete = extend(ExtensionProblem(parent, r, ws, canonical=False, lexicographic=False))
            assert complete
            want = row_append_children(parent, r, set(ws.weights))
            assert classes(got) == classes(want), (parent, r)


@pytest.mark.parametrize("seed", range(4))
def test_children_are_sound(seed):
    rng = random.Random(100 + seed)
    q = rng.choice([2, 3])
    for parent in _random_parents(rng, q, 2, 3, 7):
        ws = WeightSet.min_distance(min(weight_enumerator(parent).weights()), parent.n + 3)
        for r in range(1, parent.min_col_mult + 1):
            problem = ExtensionProblem(parent, r, ws)
            children, _ = extend(problem)
            new_point = point_index(q, (0, 0, 1))
            for child in children:
                assert (child.n, child.k) == (parent.n + r, parent.k + 1)
                assert child.min_col_mult == r
                assert set(weight_enumerator(child).weights()) <= ws.weights
                res = residual_subcode(child, new_point)
                assert are_isometric(res, parent)
                assert lexicographic_filter(parent, r, child)


def test_explicit_weight_set_is_post_filtered():
    # envelope {2, 4, 6}; weight 4 must be dropped after the search
    ws = WeightSet.explicit([2, 6])
    system = build_constraints(ExtensionProblem(LinearCode.from_mult(2, 1, {0: 4}), 2, ws, canonical=False, lexicographic=False))
    sols, _ = enumerate_solutions(system)
    loose = solutions_to_codes(system, sols)
    kept = solutions_to_codes(system, sols, ws)
    assert len(kept) < len(loose)
    assert all(set(weight_enumerator(c).weights()) <= {2, 6} for c in kept)


def test_budget_exhaustion_is_reported():
    parent = LinearCode.from_mult(3, 3, {p: 3 for p in range(13)})
    ws = WeightSet.explicit([9, 18, 27, 36, 45, 54])
    kids, complete = extend(ExtensionProblem(parent, 1, ws), budget_nodes=5)
    assert not complete


def _systems():
    yield build_constraints(ExtensionProblem(LinearCode.from_mult(3, 2, {0: 3, 1: 3, 2: 3, 3: 3}), 1, WeightSet.explicit([9, 18])))
    yield build_constraints(ExtensionProblem(LinearCode.from_mult(2, 3, {p: 2 for p in range(7)}), 2, WeightSet.min_distance(4, 20, 2)))
    yield build_constraints(
        ExtensionProblem(LinearCode.from_mult(3, 3, {0: 3, 1: 3, 2: 3, 4: 3, 5: 3, 7: 3, 9: 3, 11: 3, 12: 3}), 1, WeightSet.explicit([9, 18, 27]))
    )


@pytest.mark.parametrize("table_rows", [4, 64, 1 << 18])
def test_residue_join_agrees_with_depth_first(monkeypatch, table_rows):
    monkeypatch.setattr(extender, "JOIN_TABLE_ROWS", table_rows)
    for system in _systems():
        assert system.delta > 1
        joined, ok1 = enumerate_solutions(system)
        plain, ok2 = enumerate_solutions(dataclasses.replace(system, delta=1))
        assert ok1 and ok2
        assert sorted(s.x for s in joined) == sorted(s.x for s in plain)
        assert all(system.is_solution(s.x) for s in joined)


@pytest.mark.parametrize("list_rows", [1, 1 << 21])
def test_split_join_agrees_with_depth_first(monkeypatch, list_rows):
    # a cap of one row forces the fallback to the residue table join
    monkeypatch.setattr(extender, "SPLIT_LIST_ROWS", list_rows)
    for system in _systems():
        split, ok1 = enumerate_solutions(system)
        plain, ok2 = enumerate_solutions(dataclasses.replace(system, delta=1))
        assert ok1 and ok2
        assert sorted(s.x for s in split) == sorted(s.x for s in plain)


def test_split_join_agrees_with_table_join(monkeypatch):
    parent = LinearCode.from_mult(3, 3, {0: 3, 1: 3, 2: 3, 3: 3, 4: 3, 5: 6, 7: 3, 8: 6, 10: 3, 11: 6})
    system = build_constraints(ExtensionProblem(parent, 1, WeightSet.explicit([9, 18, 27, 36, 45, 54])))
    split, _ = enumerate_solutions(system)
    monkeypatch.setattr(extender, "SPLIT_LIST_ROWS", 1)
    joined, _ = enumerate_solutions(system)
    assert len(split) > 50
    assert sorted(s.x for s in split) == sorted(s.x for s in joined)
    assert all(system.is_solution(s.x) for s in split)


def test_shift_normalisation_keeps_every_class():
    parent = LinearCode.from_mult(3, 2, {0: 2, 1: 2, 2: 2, 3: 2})
    problem = ExtensionProblem(parent, 1, WeightSet.min_distance(3, 12, 3), canonical=False, lexicographic=False)
    system = build_constraints(problem)
    full = dataclasses.replace(system, shift_fibers=())
    reduced, _ = enumerate_solutions(system)
    every, _ = enumerate_solutions(full)
    assert len(reduced) < len(every)
    assert classes(solutions_to_codes(system, reduced)) == classes(solutions_to_codes(full, every))
