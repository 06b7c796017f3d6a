from dataclasses import replace

import numpy as np
import pytest

from milnorkit.core.constants import PROVENANCE_LEMMA
from milnorkit.core.exceptions import DomainError, JetBoundViolated, ShapeError
from milnorkit.core.series import TruncatedSeries
from milnorkit.services import DeterminacyService

CUSP = "y**2 - x**3 - pi"


@pytest.fixture
def determinacy(milnor):
    return DeterminacyService(milnor)


def test_jet_bound():
    assert DeterminacyService.determinacy_bound(2) == 6
    with pytest.raises(DomainError):
        DeterminacyService.determinacy_bound(0)


def test_cusp_newton_run(determinacy, make_germ):
    f = make_germ([CUSP], ["x", "y"])
    g = make_germ([f"{CUSP} + x**6 + 3*x**3*y**4"], ["x", "y"])
    run = determinacy.run_for_germs(f, g, target_order=12)
    assert run.mu == 2
    assert run.provenance == PROVENANCE_LEMMA
    assert run.verified_to >= 12
    assert run.ledger_ok
    assert all(e.t_order() >= 2 for e in run.epsilon)

    f_big = f.with_precision(*run.precision_used)
    g_big = g.with_precision(*run.precision_used)
    report = determinacy.verify_equisingular(f_big, g_big.f, run)
    assert report.equisingular, report.diagnostics
    assert report.mu_g == report.mu_f == 2


def test_low_order_difference_is_rejected(determinacy, make_germ):
    f = make_germ([CUSP], ["x", "y"])
    g = make_germ([f"{CUSP} + x**4"], ["x", "y"])
    with pytest.raises(JetBoundViolated):
        determinacy.run_for_germs(f, g)


def test_germs_must_share_shape(determinacy, make_germ):
    with pytest.raises(ShapeError):
        determinacy.run_for_germs(make_germ([CUSP], ["x", "y"]), make_germ(["t**2 - pi"], ["t"]))


def test_star_inclusion_on_cusp(determinacy, make_germ):
    assert determinacy.check_star_inclusion(make_germ([CUSP], ["x", "y"]), 1, mu=2)


def test_random_perturbation_has_requested_order(make_germ):
    f = make_germ([CUSP], ["x", "y"])
    perturbed = DeterminacyService.random_perturbation(f, 6, np.random.default_rng(7))
    assert (perturbed[0] - f.f[0]).t_order() >= 6


def test_quintic_tail_on_ramified_line(determinacy, local_algebra, make_germ):
    f = make_germ(["t**2 - pi"], ["t"], p=5)
    g = make_germ(["t**2 - pi + t**5"], ["t"], p=5)
    run = determinacy.run_for_germs(f, g, target_order=20)
    assert run.mu == 1
    assert run.verified_to >= 20
    assert run.ledger_ok

    f_big = f.with_precision(*run.precision_used)
    g_big = g.with_precision(*run.precision_used)
    images = [TruncatedSeries.variable(f_big.base, 1, g_big.degree_bound, 0) + run.epsilon[0]]
    moved = g_big.f[0].substitute(images)
    assert local_algebra.order_in_quotient((moved,), [(f_big.f[0],)], 1, 20) >= 20
    report = determinacy.verify_equisingular(f_big, g_big.f, run)
    assert report.equisingular, report.diagnostics


def test_star_inclusion_on_ramified_line(determinacy, make_germ):
    assert determinacy.check_star_inclusion(make_germ(["t**2 - pi"], ["t"], p=5), 0, mu=1)


@pytest.mark.parametrize("c", [0, 1, 2])
def test_star_inclusion_fails_off_the_uniformizer(determinacy, make_germ, c):
    assert not determinacy.check_star_inclusion(make_germ(["t**2"], ["t"], p=5), c, mu=1)


@pytest.mark.slow
@pytest.mark.parametrize("mu", range(1, 6))
def test_random_perturbations_are_equisingular(determinacy, make_germ, mu):
    bound = 6 * mu + 4
    f = make_germ([f"t**{mu + 1} - pi"], ["t"], precision=bound, degree_bound=bound)
    for seed in range(20):
        perturbed = DeterminacyService.random_perturbation(f, 3 * mu, np.random.default_rng(seed))
        g = replace(f, f=perturbed, literals=())
        run = determinacy.run_for_germs(f, g, target_order=6 * mu + 2)
        assert run.mu == mu
        assert run.ledger_ok, run.steps
        report = determinacy.verify_equisingular(f.with_precision(*run.precision_used),
                                                 g.with_precision(*run.precision_used).f, run)
        assert report.equisingular, (seed, report.diagnostics)
        assert report.mu_g == mu
