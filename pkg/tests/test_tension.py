import json
import math

import numpy as np
import pytest

from hvf.fields import (
    ConformalGradientField,
    GeneralizedHopfField,
    KillingField,
    associate_family_member,
    hyperbolic_translation,
    killing_from_twists,
    quadratic_two_eigenvalue,
    scale_field,
)
from hvf.solvers import (
    build_classified_field,
    conformal_gradient_classification,
    harmonic_catalogue,
    killing_classification,
)
from hvf.spaceform import hyperbolic, sphere
from hvf.tension import (
    MetricParams,
    circle_equivariance_check,
    ingredients,
    isometry_equivariance_check,
    metric_grid_scan,
    preharmonic_check,
    q_riemannian_check,
    reduced_pde_residual,
    tension,
    tension_residual,
    verify,
    weitzenbock_error,
)


def test_harmonic_conformal_gradient_s3():
    M = sphere(3)
    f = ConformalGradientField([1.0, 0.0, 0.0, 0.0], M)  # mu = 1
    mp = MetricParams(4.0, -1.0)
    for x in M.sample_points(100, 0):
        res, scale = tension_residual(f, x, mp)
        assert res < 1e-8 * scale


def test_parallel_field_harmonic_for_all_parameters():
    M = hyperbolic(3)
    f = KillingField(np.zeros((4, 4)), M)
    for p, q in ((0.0, 0.0), (3.5, -2.0), (-1.0, 1.0)):
        rep = verify(f, MetricParams(p, q), count=20, seed=1)
        assert rep.harmonic and rep.max_rel_residual == 0.0


def test_hopf_unit_field_reduction():
    # unit fields: tau_{2,q} is q-independent and proportional to the
    # harmonic-unit-field residual nabla*nabla sigma - |nabla sigma|^2 sigma
    f = GeneralizedHopfField(2, 1.0, sphere(3))
    M = f.space
    for x in M.sample_points(20, 2):
        t1 = tension(f, x, MetricParams(2.0, 0.7))
        t2 = tension(f, x, MetricParams(2.0, -3.0))
        assert np.allclose(t1, t2, atol=1e-10)
        unit_res = f.rough_laplacian(x) - f.nabla_norm_sq(x) * f.sigma(x)
        assert np.allclose(t1, 2.0 * unit_res, atol=1e-10)
        res, scale = tension_residual(f, x, MetricParams(2.0, 0.7))
        assert res < 1e-8 * scale


def test_reduced_pde_examples():
    M = sphere(3)
    f = ConformalGradientField([1.0, 0.0, 0.0, 0.0], M)
    for x in M.sample_points(30, 3):
        assert abs(reduced_pde_residual(f, x, MetricParams(4.0, -1.0))) < 1e-10
    loop = associate_family_member(math.pi / 4)
    H = loop.space
    good, bad = MetricParams(3.0, -0.5), MetricParams(3.0, -0.55)
    hits = 0
    for x in H.sample_points(100, 4):
        assert abs(reduced_pde_residual(loop, x, good)) < 1e-10
        hits += abs(reduced_pde_residual(loop, x, bad)) > 1e-3
    assert hits > 90  # generic points see the perturbation


def test_reduced_pde_requires_preharmonic_eigenfield():
    f = killing_from_twists([1.0, 2.0], sphere(4))
    with pytest.raises(ValueError):
        reduced_pde_residual(f, f.space.sample_points(1, 0)[0], MetricParams(3.0, -1.0))


def test_reduced_pde_matches_tension_direction():
    # for preharmonic eigenfields the tension is exactly (residual of the
    # reduced equation) * sigma
    cases = [
        ConformalGradientField([0.0, 0.0, 0.0, 1.0], hyperbolic(3)),
        GeneralizedHopfField(2, 0.9, sphere(4)),
        hyperbolic_translation(1.1, hyperbolic(2)),
        quadratic_two_eigenvalue(3, 1.5, sphere(5)),
    ]
    mps = [MetricParams(3.0, -0.5), MetricParams(5.0, -2.0)]
    for f in cases:
        M = f.space
        for x in M.sample_points(10, 5):
            s = f.sigma(x)
            if M.norm(s) <= 1e-6:
                continue
            for mp in mps:
                t = tension(f, x, mp)
                r = reduced_pde_residual(f, x, mp)
                assert np.allclose(t, r * s, atol=1e-9 * (1 + abs(r)) * (1 + M.norm(s)))


def test_preharmonic_check_examples():
    M = sphere(4)
    pts4 = M.sample_points(50, 6)
    ok, err = preharmonic_check(ConformalGradientField([1.0, 0, 0, 0, 0.5], M), pts4)
    assert ok and err < 1e-12
    ok, err = preharmonic_check(killing_from_twists([1.0, 2.0], M), pts4)
    assert not ok and err > 1e-3
    H = hyperbolic(2)
    ok, _ = preharmonic_check(hyperbolic_translation(1.0, H), H.sample_points(50, 7))
    assert ok


def test_q_riemannian_check():
    M = sphere(4)
    pts = M.sample_points(50, 8)
    f = killing_from_twists([1.0, 2.0], M)
    assert q_riemannian_check(f, 0.0, pts)
    assert q_riemannian_check(f, 5.0, pts)  # q >= 0 is vacuous
    # classified spherical Killing field: comfortably inside the ball bundle
    cl = killing_classification(4, 2, 1)
    kf = build_classified_field(cl)
    q0 = cl.metric_params[0].q
    assert q_riemannian_check(kf, q0, pts)
    assert q0 * kf.sup_norm**2 > -1.0 / 3.0
    # zero-free hyperbolic conformal gradient at q = 2-n: image outside the ball bundle
    H = hyperbolic(3)
    g = ConformalGradientField([math.sqrt(1.0), 0.0, 0.0, 0.0], H)
    assert not q_riemannian_check(g, 2.0 - 3.0, H.sample_points(50, 9))
    # constant length always passes
    hopf = GeneralizedHopfField(2, 1.0, sphere(3))
    assert q_riemannian_check(hopf, -50.0, hopf.space.sample_points(20, 10))


def test_verify_verdicts_and_report():
    f = GeneralizedHopfField(1, 1.0, hyperbolic(2))
    good = verify(f, MetricParams(3.0, -0.5), count=50, seed=11)
    assert good.harmonic and good.preharmonic
    bad = verify(f, MetricParams(3.0, 0.0), count=50, seed=11)
    assert not bad.harmonic
    doc = json.loads(good.to_json())
    assert doc["verdicts"] == {"harmonic": True, "preharmonic": True, "q_riemannian": False}
    assert doc["n"] == 2 and doc["epsilon"] == -1 and doc["count"] == 50
    assert len(doc["per_point"]) == 50
    assert doc["derivative_source"] == "closed-form"
    assert doc["max_rel_residual"] == max(
        row["residual"] / row["scale"] for row in doc["per_point"]
    )
    assert all(row["scale"] > 0 for row in doc["per_point"])


def test_verify_deterministic():
    f = GeneralizedHopfField(2, 1.1, sphere(4))
    a = verify(f, MetricParams(5.0, -0.5), count=30, seed=3).to_json()
    b = verify(f, MetricParams(5.0, -0.5), count=30, seed=3).to_json()
    assert a == b


def test_fd_fallback_path():
    f = ConformalGradientField([1.0, 0.0, 0.0, 0.0], sphere(3))
    rep = verify(f, MetricParams(4.0, -1.0), count=5, seed=12, fd=True, tol=1e-3)
    assert rep.derivative_source == "finite-difference"
    assert rep.harmonic  # oracle noise stays well under 1e-3
    ing = ingredients(f, f.space.sample_points(1, 0)[0], fd=True)
    assert ing.source == "finite-difference"


def test_dilations_break_harmonicity():
    seen = 0
    for entry in harmonic_catalogue():
        if entry.constant_length:
            continue
        for factor in (0.5, 2.0):
            rep = verify(entry.rescaled(factor), entry.mp, count=30, seed=13)
            assert not rep.harmonic, f"{entry.label} x{factor}"
        rep = verify(entry.rescaled(-1.0), entry.mp, count=30, seed=13)
        assert rep.harmonic, f"{entry.label} x-1"
        seen += 1
    assert seen >= 18


def test_metric_uniqueness_probe():
    cl = killing_classification(4, 2, 1)
    f = build_classified_field(cl)
    p0, q0 = cl.metric_params[0].p, cl.metric_params[0].q
    offsets = [-0.1, -0.01, 0.0, 0.01, 0.1]
    pts = f.space.sample_points(40, 14)
    grid = metric_grid_scan(f, [p0 + d for d in offsets], [q0 + d for d in offsets], pts)
    assert grid[2, 2] < 1e-7
    others = [grid[i, j] for i in range(5) for j in range(5) if (i, j) != (2, 2)]
    assert min(others) > 1e-7


def test_hyperbolic_conformal_two_metric_pairs():
    cl = conformal_gradient_classification(3, -1, -1)
    f = build_classified_field(cl)
    pts = f.space.sample_points(40, 15)
    pairs = [(mp.p, mp.q) for mp in cl.metric_params]
    assert pairs == [(4.0, pytest.approx(-5.0 / 3.0)), (-1.0, 0.0)]
    for p0, q0 in pairs:
        offsets = [-0.1, -0.01, 0.0, 0.01, 0.1]
        grid = metric_grid_scan(f, [p0 + d for d in offsets], [q0 + d for d in offsets], pts)
        assert grid[2, 2] < 1e-7
        assert min(grid[i, j] for i in range(5) for j in range(5) if (i, j) != (2, 2)) > 1e-7


def test_weitzenbock_identity():
    from test_fields import sample_fields

    for f in sample_fields():
        for x in f.space.sample_points(30, 16):
            assert weitzenbock_error(f, x) < 1e-8


def test_isometry_equivariance():
    rng = np.random.default_rng(17)
    cl = killing_classification(4, 2, 1)
    f = build_classified_field(cl)
    M = f.space
    pts = M.sample_points(10, 18)
    assert isometry_equivariance_check(f, np.eye(5), cl.metric_params[0], pts) <= 1e-15
    for _ in range(5):
        g = M.random_isometry(rng)
        assert isometry_equivariance_check(f, g, cl.metric_params[0], pts) < 1e-9
    bad = np.eye(5)
    bad[0, 0] = 2.0
    with pytest.raises(ValueError):
        isometry_equivariance_check(f, bad, cl.metric_params[0], pts)


def test_circle_equivariance():
    loop = associate_family_member(0.6)
    pts = loop.space.sample_points(10, 19)
    for t in np.linspace(0.2, 5.8, 4):
        assert circle_equivariance_check(loop, t, MetricParams(3.0, -0.5), pts) < 1e-9
