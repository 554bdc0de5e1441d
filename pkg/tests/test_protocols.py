import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relcommit.bits import BitString
from relcommit.games import chshn_game, classical_value_bruteforce, recursive_bound
from relcommit.gf2n import Field
from relcommit.netsim import CausalityError, audit_causality
from relcommit.protocols import (
    TableScript,
    binding_audit_multiround,
    count_bob_scripts,
    distributed_ot_run,
    dot_retrieve,
    expiry_adversary,
    hiding_audit_all_scripts,
    hiding_audit_multiround,
    honest_p0_plus_p1,
    local_command_bc_run,
    local_command_binding_audit,
    multiround_binding_game,
    multiround_run,
    multiround_verify,
    sbgkw_run,
    secret_sharing_bc_run,
)
from relcommit.protocols import multiround as mr
from relcommit.protocols import sbgkw
from relcommit.protocols.oblivious_transfer import query_distribution
from relcommit.protocols.secret_sharing import share_distribution


def expanded_verify(x, b, d):
    """x_{m+1} == x_m + b_m x_{m-1} + b_m b_{m-1} x_{m-2} + ... + d b_m ... b_1, summed term by term."""
    m = len(b)
    F = Field(poly=x[0].poly)
    rhs = F.zero
    for j in range(1, m + 1):
        coeff = F.one
        for i in range(j + 1, m + 1):
            coeff = coeff * b[i - 1]
        rhs = rhs + coeff * x[j - 1]
    if d:
        prod = F.one
        for bi in b:
            prod = prod * bi
        rhs = rhs + prod
    return x[m] == rhs


# -- multi-round commitment -------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(n=st.sampled_from([1, 2, 3, 8]), m=st.integers(1, 5), d=st.integers(0, 1), data=st.data())
def test_verify_matches_expanded_sum(n, m, d, data):
    F = Field(n)
    draw = lambda: F(data.draw(st.integers(0, F.order - 1)))
    x = [draw() for _ in range(m + 1)]
    b = [draw() for _ in range(m)]
    assert multiround_verify(x, b, d) == expanded_verify(x, b, d)


@pytest.mark.parametrize("n,m", [(1, 1), (1, 3), (4, 2), (8, 5)])
@pytest.mark.parametrize("d", [0, 1])
def test_honest_multiround_accepts(n, m, d):
    for seed in range(5):
        out = multiround_run(n, m, d=d, seed=seed)
        assert out.accepted and out.d == d
        assert out.timing_ok()
        assert audit_causality(out.transcript, out.scenario)


def test_honest_p0_plus_p1_is_one():
    assert honest_p0_plus_p1(1, 2) == 1
    assert honest_p0_plus_p1(2, 1, d0=1) == 1


@pytest.mark.parametrize("n,m,expected", [(1, 1, Fraction(3, 2)), (1, 2, Fraction(7, 4)), (2, 1, Fraction(5, 4))])
def test_binding_audit_values(n, m, expected):
    audit = binding_audit_multiround(n, m)
    assert audit.p0_plus_p1 == expected
    assert audit.within_bound
    assert audit.bound == recursive_bound(2 ** n, m).last


def test_binding_game_single_round_is_chsh():
    # with m = 1 the cheating game is CHSH_n
    for n in (1, 2):
        assert (classical_value_bruteforce(multiround_binding_game(n, 1)).value
                == classical_value_bruteforce(chshn_game(n)).value)


def test_zeros_adversary_wins_challenge_zero():
    for gc in (True, False):
        for seed in range(4):
            assert multiround_run(2, 3, adversary=mr.zeros_adversary(2, 3, gc), challenge=0, seed=seed).accepted


def test_zeros_adversary_challenge_one_needs_zero_product():
    wins = 0
    for seed in range(40):
        out = multiround_run(1, 2, adversary=mr.zeros_adversary(1, 2), challenge=1, seed=seed)
        ys = [out.transcript.get(f"y{k}").value.value for k in (1, 2)]
        assert out.accepted == (ys[0] * ys[1] == 0)
        wins += out.accepted
    assert 0 < wins < 40


def test_adversarial_run_needs_challenge():
    with pytest.raises(ValueError):
        multiround_run(1, 2, adversary=mr.zeros_adversary(1, 2))
    with pytest.raises(ValueError):
        multiround_run(1, 2, d=2)


def test_physical_layout_duration():
    out = multiround_run(8, 5, distance_km=131.0, seed=1)
    assert out.accepted
    assert out.extra["duration"] == pytest.approx(5 * 131 / 299792.458 / 1.001, rel=1e-12)


# -- hiding ------------------------------------------------------------------

def test_script_counts():
    assert count_bob_scripts(1, 2) == 4
    assert count_bob_scripts(1, 3) == 16
    assert count_bob_scripts(1, 2, "full") == 8


@pytest.mark.parametrize("n,m", [(1, 2), (1, 3), (2, 2)])
def test_hiding_all_scripts(n, m):
    count, ok = hiding_audit_all_scripts(n, m)
    assert count == count_bob_scripts(n, m)
    assert ok


def test_hiding_against_fully_informed_bob():
    assert hiding_audit_all_scripts(1, 3, "full") == (count_bob_scripts(1, 3, "full"), True)


def test_hiding_distribution_is_uniform_per_prefix():
    script = TableScript(({(): 1}, {(): 1}, {(0,): 1, (1,): 0}))
    audit = hiding_audit_multiround(1, 3, script)
    for d in (0, 1):
        for t in (1, 2, 3):
            dist = audit.distributions[d][t]
            assert set(dist.values()) == {Fraction(1, 2 ** t)}
            assert len(dist) == 2 ** t


def test_hiding_budget():
    from relcommit.games import BudgetExceeded
    with pytest.raises(BudgetExceeded):
        hiding_audit_multiround(8, 3, lambda k, xs: 0)


# -- two-agent commitment ------------------------------------------------------

@pytest.mark.parametrize("n", [1, 3, 16])
@pytest.mark.parametrize("d", [0, 1])
def test_sbgkw_honest_accepts(n, d):
    for seed in range(5):
        out = sbgkw_run(n, d=d, seed=seed)
        assert out.accepted and out.d == d and out.binding_secure
        assert audit_causality(out.transcript, out.scenario)


def test_sbgkw_binding_exhaustive():
    """Every pair of non-communicating openings: p0 + p1 = 2 * omega(CHSH_n) = 1 + 2^-n."""
    for n in (1, 2):
        strings = [BitString(v, n) for v in range(2 ** n)]
        best = Fraction(0)
        for x1 in strings:
            # x2 may depend on d only; count wins over (b, d)
            for x2_0, x2_1 in itertools.product(strings, repeat=2):
                wins = sum(sbgkw.sbgkw_accepts(x1, (x2_0, x2_1)[d], b, d) for b in strings for d in (0, 1))
                best = max(best, Fraction(wins, 2 ** n))
        assert best == 1 + Fraction(1, 2 ** n)


def test_sbgkw_zeros_adversary():
    acc = {0: 0, 1: 0}
    for seed in range(64):
        for ch in (0, 1):
            acc[ch] += sbgkw_run(2, seed=seed, adversary=sbgkw.zeros_adversary(2), challenge=ch).accepted
    assert acc[0] == 64
    assert 0 < acc[1] < 64


def test_sbgkw_expiry():
    late = sbgkw_run(4, t_open=2, seed=1, adversary=expiry_adversary(4), challenge=1)
    assert late.accepted and not late.binding_secure and late.flags
    with pytest.raises(CausalityError):
        sbgkw_run(4, t_open=1, seed=1, adversary=expiry_adversary(4), challenge=1)
    assert sbgkw.expired(2) and not sbgkw.expired(Fraction(19, 10))
    with pytest.raises(ValueError):
        sbgkw_run(2, t_open=0)


def test_sbgkw_hiding_commit_message_uniform():
    from collections import Counter
    n = 2
    for d in (0, 1):
        for b in range(4):
            seen = Counter(sbgkw.SbgkwState(n, d, BitString(a, n), BitString(b, n)).x1.value for a in range(4))
            assert set(seen.values()) == {1} and len(seen) == 4


# -- local command ------------------------------------------------------------

def test_local_command():
    for d in (0, 1):
        assert local_command_bc_run(d).accepted
    assert not local_command_bc_run(0, x2=1).accepted
    glob, loc = local_command_binding_audit(True), local_command_binding_audit(False)
    assert glob["p0_plus_p1"] == 2 and not glob["secure"]
    assert loc["p0_plus_p1"] == 1 and loc["secure"]


# -- secret sharing -------------------------------------------------------------

@pytest.mark.parametrize("d,a", list(itertools.product((0, 1), (0, 1, None))))
def test_secret_sharing_reveals(d, a):
    out = secret_sharing_bc_run(d, seed=3, a=a)
    assert out.accepted and out.d == d
    assert out.transcript.get("revealed").t == 1
    assert audit_causality(out.transcript, out.scenario)


def test_each_share_is_uniform():
    for which in (1, 2):
        assert share_distribution(0, which) == share_distribution(1, which) == {0: Fraction(1, 2), 1: Fraction(1, 2)}


# -- oblivious transfer ----------------------------------------------------------

def test_dot_retrieve_exhaustive():
    n = 2
    for m0, m1, r in itertools.product(range(4), repeat=3):
        for c, alpha in itertools.product((0, 1), repeat=2):
            got = dot_retrieve(BitString(m0, n), BitString(m1, n), c, alpha, BitString(r, n))
            assert got.value == (m0, m1)[c]


def test_dot_queries_uniform():
    for which in (1, 2):
        assert query_distribution(0, which) == query_distribution(1, which)


@settings(max_examples=30, deadline=None)
@given(m0=st.integers(0, 255), m1=st.integers(0, 255), c=st.integers(0, 1), seed=st.integers(0, 2**32))
def test_dot_run(m0, m1, c, seed):
    res = distributed_ot_run(BitString(m0, 8), BitString(m1, 8), c, seed=seed)
    assert res.message.value == (m0, m1)[c]
    assert res.queries[0] ^ res.queries[1] == c
    assert audit_causality(res.transcript, res.scenario)
