"""Every acceptance criterion at its stated sample size and tolerance.

Each row prints one PASS/FAIL line (repeated in the terminal summary). Rows
listed in UNATTAINABLE fail for reasons recorded in the decision notes; they
are reported as expected failures instead of being loosened.
"""

import pytest

from ovalg import reproduce

import conftest
from oracles import normal_form_hilbert

UNATTAINABLE = {
    (2, "H(6) = 0"): "the graded ring is Gorenstein with socle degree 8, so H(6) = H(2) - rank = 1 for every f",
    (2, "kernel at d=4,5,6"): "M_6 has 70 rows and 28 columns, so its kernel is at least 42, never 27",
    (5, "both 3 and 4 observed"): "every random seed gives d_reg = 4; d_reg = 3 needs a vinegar monomial "
                                  "missing from the rows, shown by the constructed row",
    (8, "example 2: H_(V+Q)/P"): "the target vector is inconsistent with the target H_R/P (297 - 248 = 49); "
                                 "generic seeds give 49 at d=6 and 0 from d=8",
    (10, "NH-OV m = n+1 over GF(2)"): "v = 1 would need solving degree 2, but M_<=2 alone is never a Groebner "
                                      "basis for these systems",
    (10, "NH-OV m = n+1 over the char0 proxy"): "the solving degree is v+2 in every run; the counting "
                                                "argument compares binom(n, v+1) with binom(n+1, v+1)",
}


def normal_form_oracle(polys, D):
    ring = polys[0].ring
    return normal_form_hilbert([dict(f.terms) for f in polys], ring.n, ring.p, D, q=ring.p)


def _known(row):
    for (k, prefix), reason in UNATTAINABLE.items():
        if row.criterion == k and prefix in row.claim:
            return reason
    return None


@pytest.mark.parametrize("k", sorted(reproduce.CRITERIA))
def test_criterion(k):
    kwargs = {"oracle": normal_form_oracle} if k == 11 else {}
    rows = reproduce.CRITERIA[k](**kwargs)
    assert rows
    expected_failures = []
    unexpected = []
    for row in rows:
        line = row.line()
        print(line)
        conftest.ACCEPTANCE_LINES.append(line)
        if not row.passed:
            reason = _known(row)
            (expected_failures if reason else unexpected).append((line, reason))
    assert not unexpected, "\n".join(line for line, _ in unexpected)
    if expected_failures:
        pytest.xfail("; ".join(f"{line.split(':')[0]}: {reason}" for line, reason in expected_failures))
