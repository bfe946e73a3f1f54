"""Exit criteria, one check per criterion at the stated tolerance.

Run under pytest (one PASS/FAIL line per criterion is printed even with
output capture on) or directly with ``python tests/test_acceptance.py``.
"""

import json
import sys

import numpy as np
import pytest
import sympy

from orthocartan.cartan import family_orthogonal_cartan, standard_cartan, verify_cartan, verify_orthogonal
from orthocartan.cli import RunConfig, cmd_suite
from orthocartan.coxeter import (cartan_in_bracket_image, coxeter_fixed_point_check, coxeter_lift_su,
                                 strengthen_to_regular)
from orthocartan.descent import (descend_to_complement, descent_report, goto_factorize,
                                 kostant_projection_check, one_and_half_check, one_and_half_span,
                                 root_space_decomposition)
from orthocartan.liealg import algebra
from orthocartan.numkernel import containment_residual, orthocomplement, subspace_distance

SIZES = [("su", n) for n in range(2, 9)] + [("sp", n) for n in range(1, 5)] \
    + [("so", n) for n in range(3, 11)]
RANK = {"su": lambda n: n - 1, "sp": lambda n: n, "so": lambda n: n // 2}
MS = range(2, 9)

pytestmark = pytest.mark.acceptance


def _line(num, title, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {title} ({detail})"


def criterion_1():
    worst = 0.0
    ok = True
    for f, n in SIZES:
        A = algebra(f, n)
        C, C2 = standard_cartan(A), family_orthogonal_cartan(A)
        for X in (C, C2):
            rep = verify_cartan(X)
            ok &= X.dim == RANK[f](n) and rep.abelian and rep.self_centralizing
            worst = max(worst, rep.residuals["abelian"], rep.residuals["self_centralizing"])
        orth = verify_orthogonal(C, C2)
        worst = max(worst, orth)
    return ok and worst < 1e-8, f"max residual {worst:.2e}"


def criterion_2():
    worst = 0.0
    for m in MS:
        r = coxeter_lift_su(m).residuals()
        worst = max(worst, r["exp_N"], r["n_gDg"], r["exp_Lambda"])
    return worst < 1e-9, f"max residual {worst:.2e}"


def _cartan_matrix_det(m):
    r = m - 1
    M = sympy.zeros(r, r)
    for i in range(r):
        M[i, i] = 2
        if i + 1 < r:
            M[i, i + 1] = M[i + 1, i] = -1
    return int(M.det())


def criterion_3():
    ok, dets = True, []
    for m in MS:
        d = coxeter_fixed_point_check(coxeter_lift_su(m)).residuals["abs_det"]
        dets.append(d)
        ok &= d > 0.5 and abs(d - _cartan_matrix_det(m)) < 1e-6
    ok &= abs(dets[0] - 2) < 1e-6 and abs(dets[1] - 3) < 1e-6
    return ok, "|det| = " + ", ".join(f"{d:.6f}" for d in dets)


def criterion_4():
    worst = 0.0
    for m in MS:
        L = coxeter_lift_su(m)
        A = L.algebra
        C = standard_cartan(A)
        worst = max(worst, cartan_in_bracket_image(C, L.N).residuals["max_lstsq"])
        a = strengthen_to_regular(A, L.N, seed=m)
        if not A.is_regular(a):
            return False, f"strengthened element not regular for m={m}"
        worst = max(worst, containment_residual(C.space, A.ad_image(a)),
                    containment_residual(A.ad_image(L.N), A.ad_image(a)))
    return worst < 1e-8, f"max residual {worst:.2e}"


def criterion_5():
    worst = 0.0
    for f, n in SIZES:
        A = algebra(f, n)
        for seed in range(20):
            a = A.random_element(seed)
            d = subspace_distance(orthocomplement(A.centralizer(a), A.tol), A.ad_image(a))
            worst = max(worst, d)
    return worst < 1e-8, f"max distance {worst:.2e}"


def criterion_6():
    worst = 0.0
    for f, n in SIZES:
        R = root_space_decomposition(standard_cartan(algebra(f, n)))
        worst = max(worst, max(R.relation_residuals().values()))
    return worst < 1e-8, f"max relation residual {worst:.2e}"


def criterion_7():
    ok = True
    w_rel = w_dec = w_grp = 0.0
    for f, n in SIZES:
        A = algebra(f, n)
        C = standard_cartan(A)
        R = root_space_decomposition(C)
        for seed in range(50):
            x = A.random_element(seed)
            tr = descend_to_complement(x, R=R, max_iter=10000)
            rep = descent_report(x, tr, C)
            w_rel = max(w_rel, rep["proj_C"] / max(1.0, A.norm(x)))
            w_dec = max(w_dec, rep["decrement"])
            w_grp = max(w_grp, rep["group"])
            ok &= rep["strict_decrease"]
    ok &= w_rel < 1e-8 and w_dec < 1e-9 and w_grp < 1e-8
    return ok, f"proj_C/|x| {w_rel:.2e}, decrement {w_dec:.2e}, group {w_grp:.2e}"


def criterion_8():
    ok = True
    worst = 0.0
    for f, n in SIZES:
        A = algebra(f, n)
        for seed in range(50):
            x = A.random_element(seed)
            scale = max(1.0, A.norm(x))
            valid = {}
            for strategy in (("descent", "coxeter") if f == "su" else ("descent",)):
                w = goto_factorize(A, x, strategy, seed)
                valid[strategy] = w.residual < 1e-7 * scale and w.a_regular
                worst = max(worst, w.residual / scale)
            ok &= all(valid.values()) and len(set(valid.values())) == 1
    return ok, f"max relative reconstruction residual {worst:.2e}"


def criterion_9():
    ok = True
    w_ab = w_z = 0.0
    for f, n in SIZES:
        A = algebra(f, n)
        for seed in range(10):
            a = A.random_regular(seed)
            b = one_and_half_span(A, a, seed)
            w_ab = max(w_ab, abs(A.inner(a, b)))
            Za, Zb = A.centralizer(a), A.centralizer(b)
            w_z = max(w_z, float(np.abs(Za.basis @ Zb.basis.T).max()))
            ok &= one_and_half_check(A, a, b)["sum_dim"] == A.dim
    ok &= w_ab < 1e-8 and w_z < 1e-8
    return ok, f"|inner(a,b)| {w_ab:.2e}, centralizers {w_z:.2e}"


def criterion_10():
    worst = zero = 0.0
    for n in (2, 3):
        A = algebra("su", n)
        x = standard_cartan(A).generic_element(n)
        rep = kostant_projection_check(A, x, samples=200, seed=n)
        worst, zero = max(worst, rep.max_distance), max(zero, rep.zero_distance)
    return worst < 1e-7 and zero < 1e-7, f"max hull distance {worst:.2e}, zero {zero:.2e}"


def criterion_11():
    cfg = RunConfig(seed=7, sweep=True)
    first, second = cmd_suite(cfg), cmd_suite(cfg)
    for c in (first, second):
        c.pop("timestamp")
    same = json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)
    return same, f"{len(first['verdicts'])} verdicts compared"


CRITERIA = [
    (1, "orthogonal Cartan pairs", criterion_1),
    (2, "Coxeter lifts", criterion_2),
    (3, "Coxeter element has no fixed points", criterion_3),
    (4, "Cartan inside bracket images", criterion_4),
    (5, "image of ad equals centralizer complement", criterion_5),
    (6, "root-space relations", criterion_6),
    (7, "descent to the Cartan complement", criterion_7),
    (8, "bracket factorization", criterion_8),
    (9, "one-and-a-half generation", criterion_9),
    (10, "projection convexity", criterion_10),
    (11, "deterministic suite certificates", criterion_11),
]


@pytest.mark.parametrize("num,title,check", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(num, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num, title, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(_line(num, title, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
