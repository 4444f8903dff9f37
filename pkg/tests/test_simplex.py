"""Exact rational simplex: hand-checked LPs, pathologies, and a float oracle."""

import random
from fractions import Fraction

import pytest

from amenable_entropy.simplex import Infeasible, Unbounded, solve_lp

F = Fraction


def test_small_cover_like_lp():
    # min x + y  s.t.  x + 2y >= 2,  2x + y >= 2  ->  4/3 at (2/3, 2/3)
    res = solve_lp(
        objective={0: F(1), 1: F(1)},
        rows=[{0: F(1), 1: F(2)}, {0: F(2), 1: F(1)}],
        senses=(">=", ">="),
        rhs=[F(2), F(2)],
        num_vars=2,
    )
    assert res.value == F(4, 3)
    assert res.x.get(0, F(0)) == F(2, 3)
    assert res.x.get(1, F(0)) == F(2, 3)


def test_maximize_box():
    res = solve_lp(
        objective={0: F(1), 1: F(1)},
        rows=[{0: F(1)}, {1: F(1)}],
        senses=("<=", "<="),
        rhs=[F(1), F(2)],
        num_vars=2,
        maximize=True,
    )
    assert res.value == F(3)


def test_equality_constraint():
    # min x  s.t.  x + y == 1  ->  0 with y = 1
    res = solve_lp(
        objective={0: F(1)},
        rows=[{0: F(1), 1: F(1)}],
        senses=("==",),
        rhs=[F(1)],
        num_vars=2,
    )
    assert res.value == 0
    assert res.x.get(1, F(0)) == 1


def test_infeasible_detected():
    with pytest.raises(Infeasible):
        solve_lp(
            objective={0: F(1)},
            rows=[{0: F(1)}, {0: F(1)}],
            senses=(">=", "<="),
            rhs=[F(1), F(0)],
            num_vars=1,
        )


def test_unbounded_detected():
    with pytest.raises(Unbounded):
        solve_lp(
            objective={0: F(-1)},
            rows=[{0: F(-1)}],
            senses=("<=",),
            rhs=[F(0)],
            num_vars=1,
        )


def test_beale_cycling_example_terminates():
    # classic degenerate LP that cycles under the textbook pivot rule;
    # Bland's rule must terminate at -1/20
    res = solve_lp(
        objective={0: F(-3, 4), 1: F(150), 2: F(-1, 50), 3: F(6)},
        rows=[
            {0: F(1, 4), 1: F(-60), 2: F(-1, 25), 3: F(9)},
            {0: F(1, 2), 1: F(-90), 2: F(-1, 50), 3: F(3)},
            {2: F(1)},
        ],
        senses=("<=", "<=", "<="),
        rhs=[F(0), F(0), F(1)],
        num_vars=4,
    )
    assert res.value == F(-1, 20)


def test_exact_rational_data_gives_exact_optimum():
    res = solve_lp(
        objective={0: F(1)},
        rows=[{0: F(3)}],
        senses=(">=",),
        rhs=[F(1)],
        num_vars=1,
    )
    assert res.value == F(1, 3)


def test_solution_satisfies_constraints():
    rng = random.Random(7)
    for _ in range(10):
        n, m = rng.randint(2, 5), rng.randint(2, 6)
        rows = [
            {j: F(rng.randint(0, 4)) for j in range(n) if rng.random() < 0.8}
            for _ in range(m)
        ]
        rows = [r or {0: F(1)} for r in rows]
        target = [F(rng.randint(1, 3)) for _ in range(n)]
        rhs = [sum(r.get(j, F(0)) * target[j] for j in range(n)) for r in rows]
        obj = {j: F(rng.randint(1, 5)) for j in range(n)}
        res = solve_lp(objective=obj, rows=rows, senses=[">="] * m, rhs=rhs,
                       num_vars=n)
        # feasibility of the returned point, exactly
        for r, b in zip(rows, rhs):
            assert sum(c * res.x.get(j, F(0)) for j, c in r.items()) >= b
        # the planted point bounds the optimum from above
        assert res.value <= sum(obj[j] * target[j] for j in range(n))


def test_against_float_lp_oracle():
    scipy = pytest.importorskip("scipy.optimize")
    rng = random.Random(11)
    for trial in range(20):
        n, m = rng.randint(2, 6), rng.randint(2, 7)
        dense = [[F(rng.randint(0, 5)) for _ in range(n)] for _ in range(m)]
        for i in range(m):
            if all(v == 0 for v in dense[i]):
                dense[i][rng.randrange(n)] = F(1)
        target = [F(rng.randint(0, 3)) for _ in range(n)]
        rhs = [sum(dense[i][j] * target[j] for j in range(n)) - F(rng.randint(0, 2))
               for i in range(m)]
        obj = [F(rng.randint(1, 6)) for _ in range(n)]
        res = solve_lp(
            objective={j: obj[j] for j in range(n)},
            rows=[{j: dense[i][j] for j in range(n) if dense[i][j]} for i in range(m)],
            senses=[">="] * m,
            rhs=rhs,
            num_vars=n,
        )
        ref = scipy.linprog(
            c=[float(v) for v in obj],
            A_ub=[[-float(dense[i][j]) for j in range(n)] for i in range(m)],
            b_ub=[-float(b) for b in rhs],
            bounds=[(0, None)] * n,
            method="highs",
        )
        assert ref.success
        assert abs(float(res.value) - ref.fun) < 1e-7, f"trial {trial}"
