"""Section-level analysis of twistor models.

Membership, fiber incidence, fiber solving, Jacobian rank scans, branch
tests, normal-sheaf splitting and the hypercomplex/weakly-hypercomplex
classification pipeline.  Closed-form fiber solvers are registered for the
quadric family (x*y = z^2 + mu) and for equation-free bundles; everything
else falls back to seeded multistart Newton.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (DimensionError, FiberError, ModelError, OriginError)
from .models import TwistorModel, squaring_section
from .projline import (CoeffPoly, P1Point, SplittingType, as_p1,
                       kernel_splitting, poly_divmod)
from .scalars import abs2, conj_of, exact_sqrt, is_exact, to_complex
from .systems import RealEquationSystem, real_section_system


@dataclass
class SolveConfig:
    """Tolerances and sampling controls; two orders between adjacent cutoffs."""

    tol: float = 1e-9                # membership, relative
    rank_rtol: float = 1e-7          # singular values below rtol*smax are zero
    newton_tol: float = 1e-12
    max_iter: int = 50
    dedup_radius: float = 1e-6
    multistart: int = 40
    seed: int = 0
    fiber_tol: float = 1e-8
    scan_samples: int = 60
    branch_checks: int = 6
    continuation_step: float = 0.05
    cluster_radius: float = 0.35
    family_samples: int = 24


DEFAULT_CONFIG = SolveConfig()


@dataclass(frozen=True)
class FiberPoint:
    """Point of a fiber: base point plus coordinate values in its chart."""

    zeta: P1Point
    values: tuple


def evaluate_section(model: TwistorModel, params, zeta) -> FiberPoint:
    """Value of the embedded section at a base point (chart of the point)."""
    pt = as_p1(zeta)
    polys = model.section_basis.embed(list(params))
    values = tuple(s.eval_point(pt) for s in polys)
    return FiberPoint(pt, values)


def _point_on_fiber(model: TwistorModel, pt: P1Point, values, cfg: SolveConfig):
    scale = 1.0 + sum(float(abs2(to_complex(v))) for v in values)
    for eq in model.equations:
        coeff_scale = 1.0 + max((max(abs(to_complex(c)) for c in g.coeffs)
                                 for _, g in eq.monomials), default=0.0)
        val = eq.eval_at(pt, [to_complex(v) for v in values])
        if abs(to_complex(val)) > cfg.fiber_tol * scale * coeff_scale:
            return False
    return True


def _num_rank(mat: np.ndarray, rtol: float) -> int:
    if mat.size == 0:
        return 0
    svals = np.linalg.svd(mat, compute_uv=False)
    if svals[0] == 0:
        return 0
    return int(np.sum(svals > rtol * svals[0]))


def _num_nullspace(mat: np.ndarray, rtol: float) -> np.ndarray:
    """Orthonormal kernel basis as rows."""
    if mat.size == 0:
        return np.eye(mat.shape[1] if mat.ndim == 2 else 0)
    u, svals, vh = np.linalg.svd(mat)
    cutoff = rtol * (svals[0] if len(svals) and svals[0] > 0 else 1.0)
    rank = int(np.sum(svals > cutoff))
    return vh[rank:]


def incidence_rows(model: TwistorModel, pt: P1Point):
    """Real-linear map params -> stacked (re, im) coordinate values at pt."""
    basis = model.section_basis
    mats = basis.complex_matrices()
    rows = []
    for i, k in enumerate(model.degrees):
        z = to_complex(pt.value)
        if pt.chart == "std":
            powvec = np.array([z ** m for m in range(k + 1)])
        else:
            powvec = np.array([z ** (k - m) for m in range(k + 1)])
        crow = powvec @ mats[i]
        rows.append(crow.real)
        rows.append(crow.imag)
    return np.array(rows)


def _incidence_rhs(values):
    out = []
    for v in values:
        vc = to_complex(v)
        out.extend([vc.real, vc.imag])
    return np.array(out)


@dataclass
class FamilyDescriptor:
    """Positive-dimensional solution family (an ellipsoid in kernel coordinates)."""

    dim: int
    center_params: np.ndarray
    basis_params: np.ndarray   # rows: parameter-space directions
    shape: np.ndarray          # (u - u*)^T shape (u - u*) = radius_sq on the family
    radius_sq: float

    def sample(self, n: int, rng) -> list:
        evals, evecs = np.linalg.eigh(self.shape)
        half = evecs @ np.diag(1.0 / np.sqrt(evals)) * math.sqrt(self.radius_sq)
        out = []
        k = self.shape.shape[0]
        for _ in range(n):
            s = rng.standard_normal(k)
            s /= np.linalg.norm(s)
            u = half @ s
            out.append(self.center_params + u @ self.basis_params)
        return out


@dataclass
class FiberSolveResult:
    solutions: list
    complete: bool
    family: FamilyDescriptor | None
    method: str


def _pair_partner(cp: CoeffPoly) -> CoeffPoly:
    """Swap-rule partner of a degree-2 coefficient triple (sign +1)."""
    c0, c1, c2 = cp.coeffs
    return CoeffPoly(2, [conj_of(c2), -conj_of(c1), conj_of(c0)])


def _ztype_coords(cp: CoeffPoly, tol: float = 1e-8):
    """(Re c0, Im c0, c1) for a z-type triple; checks the type identity."""
    c0, c1, c2 = (to_complex(c) for c in cp.coeffs)
    scale = 1.0 + abs(c0) + abs(c1) + abs(c2)
    if abs(c2 + c0.conjugate()) > tol * scale or abs(c1.imag) > tol * scale:
        raise ModelError("polynomial is not of z-type")
    return np.array([c0.real, c0.imag, c1.real])


def _quadric_incidence(pt: P1Point, values):
    """Incidence rows, particular solutions and the pinned-pair factor."""
    z = to_complex(pt.value)
    x_val, y_val, z_val = (to_complex(v) for v in values)
    if pt.chart == "std":
        e1 = np.array([1.0, z, z * z])
        e2 = np.array([np.conj(z) ** 2, -np.conj(z), 1.0])
        nu = CoeffPoly(2, [-z, 1.0 - abs(z) ** 2, np.conj(z)])
        col_a, col_b, col_r = 1.0 - z * z, 1j * (1.0 + z * z), z
    else:
        e1 = np.array([z * z, z, 1.0])
        e2 = np.array([1.0, -np.conj(z), np.conj(z) ** 2])
        nu = CoeffPoly(2, [np.conj(z), 1.0 - abs(z) ** 2, -z])
        col_a, col_b, col_r = z * z - 1.0, 1j * (z * z + 1.0), z
    x_part, *_ = np.linalg.lstsq(np.vstack([e1, e2]),
                                 np.array([x_val, np.conj(y_val)]), rcond=None)
    zmat = np.array([[col_a.real, col_b.real, col_r.real],
                     [col_a.imag, col_b.imag, col_r.imag]])
    zpart, *_ = np.linalg.lstsq(zmat, np.array([z_val.real, z_val.imag]),
                                rcond=None)
    z0_p = complex(zpart[0], zpart[1])
    r_p = float(zpart[2])
    return x_part, z0_p, r_p, nu


def _quadric_reduce(model: TwistorModel, pt: P1Point, values, cfg: SolveConfig):
    """Closed-form fiber solver for x*y = z^2 + mu.

    Incidence at the point and its antipodal image restricts the parameters
    to (w, t) in C x R; the remaining conditions collapse to one quadric on
    the kernel of a small linear system, so the fiber is two points, one
    point, empty, or an ellipsoid family.
    """
    mu = (model.mu or CoeffPoly.zero(4)).to_float()
    x_part, z0_p, r_p, nu = _quadric_incidence(pt, values)
    x_p = CoeffPoly(2, list(x_part))
    y_p = _pair_partner(x_p)
    z_p = CoeffPoly(2, [z0_p, r_p, -np.conj(z0_p)])
    g_p = x_p * y_p - z_p * z_p - mu
    quot, rem = poly_divmod(g_p.coeffs, nu.trimmed(1e-13), tol=1e-13)
    scale = 1.0 + max(abs(to_complex(c)) for c in g_p.coeffs)
    if any(abs(to_complex(c)) > 1e-7 * scale for c in rem):
        raise FiberError("incidence data is inconsistent with the fiber equation")
    while len(quot) > 3:
        top = quot.pop()
        if abs(to_complex(top)) > 1e-7 * scale:
            raise FiberError("incidence data is inconsistent with the fiber equation")
    h_p = CoeffPoly(2, quot)
    i_unit = 1j
    col_rew = _ztype_coords(y_p - x_p)
    col_imw = _ztype_coords((y_p + x_p).scale(i_unit))
    col_t = _ztype_coords(z_p.scale(-2.0))
    col_rho = -_ztype_coords(nu)
    tmat = np.column_stack([col_rew, col_imw, col_t, col_rho])
    rhs = -_ztype_coords(h_p)
    base, *_ = np.linalg.lstsq(tmat, rhs, rcond=None)
    resid_scale = 1.0 + np.linalg.norm(rhs) + np.linalg.norm(tmat)
    if np.linalg.norm(tmat @ base - rhs) > 1e-8 * resid_scale:
        return [], None  # linear stage inconsistent: no real section hits the target
    kernel = _num_nullspace(tmat, cfg.rank_rtol)
    kdim = kernel.shape[0]
    dmask = np.array([1.0, 1.0, 1.0, 0.0])
    pmat = kernel @ np.diag(dmask) @ kernel.T
    qvec = 2.0 * kernel @ (dmask * base) - kernel[:, 3]
    cval = float(base[:3] @ base[:3] - base[3])
    center, *_ = np.linalg.lstsq(pmat, -qvec / 2.0, rcond=None)
    val = cval + qvec @ center + center @ pmat @ center
    vtol = cfg.tol * (1.0 + abs(cval) + np.linalg.norm(base) ** 2)

    def wt_to_params(full):
        w = complex(full[0], full[1])
        t = float(full[2])
        x = [x_part[m] + w * nu.coeffs[m] for m in range(3)]
        z0 = z0_p + t * nu.coeffs[0]
        r = r_p + t * nu.coeffs[1].real
        lead = {0: x, 2: [z0, r]}
        return np.array(model.section_basis.params_from_lead(lead), dtype=float)

    if val > vtol:
        return [], None
    if abs(val) <= vtol:
        return [wt_to_params(base + center @ kernel)], None
    if kdim == 1:
        root = math.sqrt(-val / pmat[0, 0])
        sols = [wt_to_params(base + (center[0] + s * root) * kernel[0])
                for s in (1.0, -1.0)]
        return sols, None
    # positive-dimensional family: an ellipsoid of dimension kdim-1
    center_params = wt_to_params(base + center @ kernel)
    basis_params = np.array([wt_to_params(base + kernel[i]) - wt_to_params(base)
                             for i in range(kdim)])
    fam = FamilyDescriptor(dim=kdim - 1, center_params=center_params,
                           basis_params=basis_params, shape=pmat,
                           radius_sq=float(-val))
    rng = np.random.default_rng(cfg.seed)
    return fam.sample(min(cfg.family_samples, 8), rng), fam


def _linear_reduce(model: TwistorModel, pt: P1Point, values, cfg: SolveConfig):
    """Fiber solver for equation-free bundles: one real-linear solve."""
    amat = incidence_rows(model, pt)
    b = _incidence_rhs(values)
    sol, *_ = np.linalg.lstsq(amat, b, rcond=None)
    if np.linalg.norm(amat @ sol - b) > 1e-8 * (1.0 + np.linalg.norm(b)):
        return [], None
    kernel = _num_nullspace(amat, cfg.rank_rtol)
    if kernel.shape[0] == 0:
        return [np.asarray(sol, dtype=float)], None
    fam = FamilyDescriptor(dim=kernel.shape[0], center_params=np.asarray(sol),
                           basis_params=kernel,
                           shape=np.eye(kernel.shape[0]), radius_sq=1.0)
    rng = np.random.default_rng(cfg.seed)
    return fam.sample(min(cfg.family_samples, 8), rng), fam


def _gauss_newton(resfn, jacfn, x0, cfg: SolveConfig):
    x = np.array(x0, dtype=float)
    for _ in range(cfg.max_iter):
        r = resfn(x)
        scale = 1.0 + float(x @ x)
        if np.linalg.norm(r, ord=np.inf) <= cfg.newton_tol * scale:
            return x, True
        jac = jacfn(x)
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        x = x + step
        if np.linalg.norm(step) <= 1e-15 * (1.0 + np.linalg.norm(x)):
            break
    r = resfn(x)
    return x, bool(np.linalg.norm(r, ord=np.inf) <= cfg.newton_tol * (1.0 + float(x @ x)))


def _dedup(points, radius):
    out = []
    for p in points:
        if all(np.linalg.norm(p - q) > radius for q in out):
            out.append(p)
    return out


def _sorted_solutions(points):
    return sorted(points, key=lambda p: tuple(np.round(p, 9)))


def _newton_multistart(model, sys, pt, values, cfg: SolveConfig):
    amat = incidence_rows(model, pt)
    b = _incidence_rhs(values)

    def resfn(x):
        return np.concatenate([np.array([float(v) for v in sys.residuals(x)]),
                               amat @ x - b])

    def jacfn(x):
        return np.vstack([np.asarray(sys.jacobian_at(x), dtype=float), amat])

    rng = np.random.default_rng(cfg.seed)
    scale = 1.0 + math.sqrt(sum(float(abs2(to_complex(v))) for v in values))
    found = []
    for _ in range(cfg.multistart):
        x0 = rng.standard_normal(sys.nvars) * scale
        x, ok = _gauss_newton(resfn, jacfn, x0, cfg)
        if ok:
            found.append(x)
    return _dedup(found, cfg.dedup_radius)


def solve_fiber(model: TwistorModel, zeta, target, cfg: SolveConfig | None = None,
                sys: RealEquationSystem | None = None) -> FiberSolveResult:
    """All real sections of the model meeting a given fiber point.

    Registered families use a closed-form reducer (complete); other models
    use multistart Newton with heuristic completeness.
    """
    cfg = cfg or DEFAULT_CONFIG
    if isinstance(target, FiberPoint):
        pt = target.zeta
        values = target.values
    else:
        # the chart of the point fixes the chart of the values: no canonicalizing
        pt = zeta if isinstance(zeta, P1Point) else P1Point.std(complex(zeta))
        values = tuple(target)
    if len(values) != len(model.degrees):
        raise DimensionError("fiber value count differs from coordinate count")
    if not _point_on_fiber(model, pt, values, cfg):
        raise FiberError("target does not satisfy the fiber equations")
    if model.family == "quadric":
        sols, fam = _quadric_reduce(model, pt, values, cfg)
        method = "closed-form"
        complete = True
    elif model.family == "linear":
        sols, fam = _linear_reduce(model, pt, values, cfg)
        method = "linear"
        complete = True
    else:
        sys = sys or real_section_system(model)
        sols = _newton_multistart(model, sys, pt, values, cfg)
        fam = None
        method = "newton-multistart"
        complete = False
    sys = sys or real_section_system(model)
    kept = []
    for s in sols:
        s = np.asarray(s, dtype=float)
        if sys.membership(s, tol=max(cfg.tol, 1e-8)).passed:
            kept.append(s)
    sols = _dedup(kept, cfg.dedup_radius)
    return FiberSolveResult(_sorted_solutions(sols), complete, fam, method)


@dataclass
class BranchReport:
    verdict: str            # "unbranched" | "branched"
    rank: int
    nvars: int


def branch_test(model: TwistorModel, params, zeta,
                cfg: SolveConfig | None = None,
                sys: RealEquationSystem | None = None) -> BranchReport:
    """Multiplicity-one test of a section inside its incidence fiber.

    The section is unbranched at the base point when the defining system
    plus the incidence conditions pinning its fiber value has full-rank
    Jacobian there (an isolated simple solution).
    """
    cfg = cfg or DEFAULT_CONFIG
    sys = sys or real_section_system(model)
    p = np.array([float(v) for v in params])
    if not sys.membership(p, tol=max(cfg.tol, 1e-8)).passed:
        raise ModelError("branch test requires a point of the section space")
    pt = as_p1(zeta)
    amat = incidence_rows(model, pt)
    sysjac = np.asarray(sys.jacobian_at(p), dtype=float) if len(sys) else \
        np.zeros((0, sys.nvars))
    aug = np.vstack([sysjac, amat])
    rank = _num_rank(aug, cfg.rank_rtol)
    verdict = "unbranched" if rank == sys.nvars else "branched"
    return BranchReport(verdict, rank, sys.nvars)


@dataclass
class NormalBundleReport:
    splitting: SplittingType | None
    h0: int | None
    h0_minus2: int | None
    degenerate: list
    regular_point: bool


def normal_splitting(model: TwistorModel, params,
                     cfg: SolveConfig | None = None,
                     sys: RealEquationSystem | None = None) -> NormalBundleReport:
    """Splitting type of the kernel of the linearized fiber equations.

    Each equation row is its gradient along the embedded section; the kernel
    subsheaf of the coordinate bundle is the normal sheaf of the section.
    """
    cfg = cfg or DEFAULT_CONFIG
    sys = sys or real_section_system(model)
    membership = sys.membership(list(params), tol=max(cfg.tol, 1e-8))
    if not membership.passed:
        raise ModelError("normal splitting requires a point of the section space")
    basis = model.section_basis
    polys = basis.embed(list(params))
    regular = True
    if sys.expected_regular_rank is not None and len(sys):
        pf = [float(v) for v in params]
        regular = sys.jacobian_rank(pf, cfg.rank_rtol) == sys.expected_regular_rank
    rows = []
    degenerate = []
    for jdx, eq in enumerate(model.equations):
        row = []
        for i in range(len(model.degrees)):
            part = eq.partial(i, model.degrees)
            entry = part.compose_sections(polys)
            row.append(entry)
        rows.append(row)
        locs = _row_common_zeros(row, cfg)
        if locs:
            degenerate.append({"equation": jdx, "locations": locs})
    if degenerate:
        return NormalBundleReport(None, None, None, degenerate, regular)
    splitting = kernel_splitting(rows, list(model.degrees),
                                 [eq.twist for eq in model.equations],
                                 exact=model.exact and all(
                                     is_exact(v) for v in params),
                                 rank_rtol=cfg.rank_rtol)
    return NormalBundleReport(splitting, splitting.h0(0), splitting.h0(-2),
                              [], regular)


def _row_common_zeros(row, cfg: SolveConfig):
    """Base points where every entry of a linearization row vanishes."""
    floats = [e.to_float() for e in row]
    scale = max((max(abs(c) for c in e.coeffs) for e in floats
                 if e.coeffs), default=0.0)
    if scale == 0.0:
        return ["everywhere"]
    tol = 1e-8 * (1.0 + scale)
    locs = []
    lead = None
    for e in floats:
        if not e.is_zero(tol):
            lead = e
            break
    if lead is None:
        return ["everywhere"]
    trimmed = lead.trimmed(tol)
    if len(trimmed) > 1:
        for root in np.roots(list(reversed(trimmed))):
            if all(abs(e.eval_std(root)) <= tol * (1.0 + abs(root)) ** e.degree_bound
                   for e in floats):
                locs.append(("std", complex(root)))
    if all(abs(e.coeffs[-1]) <= tol for e in floats):
        locs.append(("inf", 0j))
    return locs


@dataclass
class ScanEntry:
    params: np.ndarray
    rank: int
    deficient: bool


@dataclass
class SingularReport:
    entries: list
    singular: list
    clusters: list
    regular_count: int
    skipped: int


def singular_scan(model: TwistorModel, points,
                  cfg: SolveConfig | None = None,
                  sys: RealEquationSystem | None = None) -> SingularReport:
    """Classify candidate sections by Jacobian rank and cluster the deficient ones."""
    cfg = cfg or DEFAULT_CONFIG
    sys = sys or real_section_system(model)
    expected = sys.expected_regular_rank
    entries = []
    skipped = 0
    for p in points:
        p = np.array([float(v) for v in p])
        if not sys.membership(p, tol=max(cfg.tol, 1e-8)).passed:
            skipped += 1
            continue
        rank = sys.jacobian_rank(p, cfg.rank_rtol) if len(sys) else 0
        deficient = expected is not None and rank < expected
        entries.append(ScanEntry(p, rank, deficient))
    singular = [e for e in entries if e.deficient]
    clusters = _cluster([e.params for e in singular], cfg.cluster_radius)
    cluster_info = []
    for members in clusters:
        pts = [singular[i] for i in members]
        rep = pts[0].params
        diam = max((float(np.linalg.norm(a.params - b.params))
                    for a in pts for b in pts), default=0.0)
        cluster_info.append({
            "size": len(pts),
            "representative": [float(v) for v in rep],
            "ranks": sorted({e.rank for e in pts}),
            "diameter": diam,
        })
    return SingularReport(entries, singular, cluster_info,
                          sum(1 for e in entries if not e.deficient), skipped)


def _cluster(points, radius):
    n = len(points)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if np.linalg.norm(points[i] - points[j]) <= radius:
                ra, rb = find(i), find(j)
                if ra != rb:
                    parent[ra] = rb
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def sample_sections(model: TwistorModel, n: int, rng,
                    cfg: SolveConfig | None = None):
    """Random points of the section space, by whatever route the model allows."""
    cfg = cfg or DEFAULT_CONFIG
    if model.family == "quadric" and (model.mu is None or model.mu.is_zero(0.0)):
        out = []
        for _ in range(n):
            a = complex(rng.standard_normal(), rng.standard_normal())
            b = complex(rng.standard_normal(), rng.standard_normal())
            variant = "minus" if rng.random() < 0.5 else "plus"
            out.append(squaring_section(a, b, variant))
        return out
    if model.family == "quadric":
        mu = model.mu.to_float()
        out = []
        attempts = 0
        while len(out) < n and attempts < 6 * n:
            attempts += 1
            zeta = P1Point.std(complex(rng.standard_normal(),
                                       rng.standard_normal()) * 0.5).canonical()
            x = complex(rng.standard_normal(), rng.standard_normal())
            z = complex(rng.standard_normal(), rng.standard_normal())
            if abs(x) < 0.2:
                continue
            muval = mu.eval_point(zeta)
            y = (z * z + muval) / x
            try:
                res = solve_fiber(model, zeta, (x, y, z), cfg)
            except FiberError:
                continue
            out.extend(res.solutions)
        return out[:n]
    if model.family == "linear":
        return [rng.standard_normal(model.nparams) for _ in range(n)]
    return []


def _section_zero_points(poly: CoeffPoly, bound: int):
    """Zeros of a section, as P1 points with multiplicity (infinity included)."""
    trimmed = poly.trimmed(1e-13)
    roots = []
    if len(trimmed) > 1:
        roots = [as_p1(complex(r)) for r in np.roots(list(reversed(trimmed)))]
    return roots + [P1Point.inf(0j)] * (bound - (len(trimmed) - 1))


def _chart_value(target: P1Point, p: P1Point) -> complex:
    v = to_complex(p.value)
    if p.chart == target.chart:
        return v
    return 1.0 / v  # only used for points near the chart overlap


def _polish_double_zero(poly: CoeffPoly, pt: P1Point) -> P1Point:
    """Newton-polish a double zero of the section against its derivative."""
    coeffs = [to_complex(c) for c in poly.coeffs]
    if pt.chart != "std":
        coeffs = list(reversed(coeffs))
    deriv = [m * c for m, c in enumerate(coeffs)][1:]
    dderiv = [m * c for m, c in enumerate(deriv)][1:]
    z = to_complex(pt.value)
    for _ in range(4):
        fp = sum(c * z ** m for m, c in enumerate(deriv))
        fpp = sum(c * z ** m for m, c in enumerate(dderiv))
        if abs(fpp) < 1e-12:
            break
        z = z - fp / fpp
    return P1Point(pt.chart, z)


def _collapse_double_zeros(points, poly: CoeffPoly):
    """Average clustered root pairs and polish them as double zeros."""
    groups = []
    for p in points:
        for g in groups:
            if g[0].same_point(p, tol=1e-4):
                g.append(p)
                break
        else:
            groups.append([p])
    out = []
    for g in groups:
        ref = g[0]
        mean = sum(_chart_value(ref, p) for p in g) / len(g)
        pt = P1Point(ref.chart, mean)
        if len(g) > 1:
            pt = _polish_double_zero(poly, pt)
        out.append(pt)
    return out


def _singular_fiber_pairs(model: TwistorModel, cfg: SolveConfig):
    """Representative antipodal pairs of singular fiber points.

    Returns (pairs, notes); each pair is (point, values) with the antipodal
    partner implied.  For the quadric family these are the cone vertices over
    the zeros of mu (over every base point when mu vanishes identically).
    """
    notes = []
    ncoord = len(model.degrees)
    vertex = (0j,) * ncoord
    if model.family == "quadric":
        mu = (model.mu or CoeffPoly.zero(4)).to_float()
        if mu.is_zero(1e-13):
            notes.append("fiberwise cone vertex is singular over the whole base; "
                         "sampling representative base points")
            pts = [P1Point.std(0j), P1Point.std(0.62 + 0.31j),
                   P1Point.inf(0.41 - 0.27j)]
            return [(p, vertex) for p in pts], notes
        if model.lam is not None:
            points = _section_zero_points(model.lam.to_float(), 2)
        else:
            points = _collapse_double_zeros(
                _section_zero_points(mu, 4), mu)
        reps = []
        used = [False] * len(points)
        for i, p in enumerate(points):
            if used[i]:
                continue
            used[i] = True
            anti = p.antipodal()
            for j in range(i + 1, len(points)):
                if not used[j] and points[j].same_point(anti, tol=1e-5):
                    used[j] = True
                    break
            if not any(p.same_point(q, tol=1e-5) for q, _ in reps):
                reps.append((p, vertex))
        notes.append(f"total-space singular points over {len(reps)} "
                     "antipodal zero pair(s) of the deformation term")
        return reps, notes
    if not model.equations:
        return [], notes
    # generic cone-style check: the zero section is singular when no equation
    # has constant or linear monomials
    has_low = any(sum(exps) < 2 and not coeff.is_zero(1e-13)
                  for eq in model.equations for exps, coeff in eq.monomials)
    if not has_low:
        notes.append("zero section is fiberwise singular (no low-order monomials); "
                     "sampling representative base points")
        pts = [P1Point.std(0j), P1Point.std(0.62 + 0.31j)]
        return [(p, vertex) for p in pts], notes
    notes.append("no registered singular-point locator for this model")
    return None, notes


@dataclass
class HCClassification:
    verdict: str           # "Hypercomplex" | "WeaklyHypercomplex" | "Undetermined"
    evidence: dict


def classify_hypercomplex(model: TwistorModel,
                          cfg: SolveConfig | None = None) -> HCClassification:
    """Dichotomy test: positive-dimensional section families through singular
    fiber points force the weak verdict; otherwise isolated singular sections
    plus unbranched incidence maps give the strong one."""
    cfg = cfg or DEFAULT_CONFIG
    rng = np.random.default_rng(cfg.seed)
    sys = real_section_system(model)
    evidence = {"model": model.name, "seed": cfg.seed}
    pairs, notes = _singular_fiber_pairs(model, cfg)
    evidence["notes"] = notes
    families = []
    if pairs is None:
        evidence["singular_fiber_points"] = "unknown"
        return HCClassification("Undetermined", evidence)
    evidence["singular_fiber_points"] = [
        {"chart": p.chart, "value": [to_complex(p.value).real,
                                     to_complex(p.value).imag]}
        for p, _ in pairs]
    for pt, values in pairs:
        try:
            res = solve_fiber(model, pt, values, cfg, sys=sys)
        except FiberError:
            continue
        fam_entry = _examine_family(model, sys, pt, values, res, cfg)
        if fam_entry:
            families.append(fam_entry)
    evidence["families"] = families
    certified = [f for f in families if f["certified"]]
    if certified:
        evidence["family_dimension"] = max(f["dim"] for f in certified)
        return HCClassification("WeaklyHypercomplex", evidence)
    samples = sample_sections(model, cfg.scan_samples, rng, cfg)
    if not samples and model.equations:
        evidence["scan"] = "no sampler available"
        return HCClassification("Undetermined", evidence)
    zero = np.zeros(model.nparams)
    if sys.membership(zero, tol=max(cfg.tol, 1e-8)).passed:
        samples = list(samples) + [zero]
    scan = singular_scan(model, samples, cfg, sys=sys)
    evidence["scan"] = {
        "samples": len(scan.entries),
        "singular_clusters": scan.clusters,
        "regular": scan.regular_count,
    }
    isolated = all(c["diameter"] <= cfg.dedup_radius or c["size"] == 1
                   for c in scan.clusters)
    branch_ok = True
    checks = []
    regular = [e.params for e in scan.entries if not e.deficient]
    rng2 = np.random.default_rng(cfg.seed + 1)
    for _ in range(min(cfg.branch_checks, len(regular))):
        p = regular[int(rng2.integers(len(regular)))]
        zeta = complex(rng2.standard_normal(), rng2.standard_normal()) * 0.6
        rep = branch_test(model, p, zeta, cfg, sys=sys)
        checks.append(rep.verdict)
        if rep.verdict != "unbranched":
            branch_ok = False
    evidence["branch_checks"] = checks
    if isolated and branch_ok:
        return HCClassification("Hypercomplex", evidence)
    return HCClassification("Undetermined", evidence)


def _examine_family(model, sys, pt, values, res: FiberSolveResult,
                    cfg: SolveConfig):
    """Corank + continuation certificate for sections through a singular pair."""
    a1 = incidence_rows(model, pt)
    b1 = _incidence_rhs(values)
    anti = pt.antipodal()
    anti_values = _sigma_image_values(model, values, pt.chart)
    a2 = incidence_rows(model, anti)
    b2 = _incidence_rhs(anti_values)

    def resfn(x):
        parts = [np.array([float(v) for v in sys.residuals(x)])] if len(sys) else []
        parts.extend([a1 @ x - b1, a2 @ x - b2])
        return np.concatenate(parts)

    def jacfn(x):
        parts = [np.asarray(sys.jacobian_at(x), dtype=float)] if len(sys) else []
        parts.extend([a1, a2])
        return np.vstack(parts)

    candidates = list(res.solutions)
    if res.family is not None:
        rng = np.random.default_rng(cfg.seed + 7)
        candidates.extend(res.family.sample(2, rng))
    best = None
    for sol in candidates:
        sol = np.asarray(sol, dtype=float)
        jac = jacfn(sol)
        corank = sys.nvars - _num_rank(jac, cfg.rank_rtol)
        if corank < 1:
            continue
        kernel = _num_nullspace(jac, cfg.rank_rtol)
        step = cfg.continuation_step * (1.0 + np.linalg.norm(sol))
        confirmed = False
        for kdir in kernel[:2]:
            pred = sol + step * kdir
            corr, ok = _gauss_newton(resfn, jacfn, pred, cfg)
            if ok and np.linalg.norm(corr - sol) > max(10 * cfg.dedup_radius,
                                                       step / 4):
                if sys.membership(corr, tol=max(cfg.tol, 1e-8)).passed:
                    confirmed = True
                    break
        entry = {
            "point": {"chart": pt.chart,
                      "value": [to_complex(pt.value).real,
                                to_complex(pt.value).imag]},
            "corank": int(corank),
            "dim": int(corank),
            "certified": bool(confirmed),
            "solution": [float(v) for v in sol],
        }
        if res.family is not None:
            entry["reducer_family_dim"] = res.family.dim
            entry["samples"] = [[float(v) for v in s]
                                for s in res.family.sample(
                                    4, np.random.default_rng(cfg.seed + 11))]
        if confirmed:
            return entry
        if best is None:
            best = entry
    return best


def _sigma_image_values(model: TwistorModel, values, from_chart: str):
    """Fiber values of the antipodal image point, in the image point's chart.

    Starting from the standard chart the image lands in the other chart with
    values sign * conj(v_partner); starting from the other chart an extra
    (-1)^degree appears from the transition.
    """
    out = [None] * len(values)
    for i, rule in enumerate(model.rules):
        src = conj_of(to_complex(values[rule.partner]))
        factor = rule.sign if from_chart == "std" else rule.sign * ((-1) ** model.degrees[i])
        out[i] = factor * src
    return tuple(out)


def component_label(params, tol: float = 1e-9):
    """Sign s with |x0| - |x2| = s*r on the quadric; 'boundary' when both vanish."""
    p = [float(v) for v in params]
    if len(p) != 9:
        raise DimensionError("component labels require the 9-parameter model")
    scale = 1.0 + math.sqrt(sum(v * v for v in p))
    if all(abs(v) <= tol * scale for v in p):
        raise OriginError("both components meet at the origin")
    d = math.hypot(p[0], p[1]) - math.hypot(p[4], p[5])
    r = p[8]
    tol_s = tol * scale
    if abs(r) <= tol_s and abs(d) <= tol_s:
        return "boundary"
    plus = abs(d - r)
    minus = abs(d + r)
    best = 1 if plus <= minus else -1
    if min(plus, minus) > 1e-6 * scale:
        raise ModelError("point does not satisfy the component dichotomy")
    return best


def _hypot_scalar(re, im, exact):
    if exact:
        val = exact_sqrt(re * re + im * im)
        if val is None:
            raise ModelError("modulus is not an exact rational square")
        return val
    return math.hypot(float(re), float(im))


def sym_matrix_model(params, label: int, exact: bool = False, tol: float = 1e-9):
    """Traceless symmetric matrix pair (B, t) recovered from a quadric section.

    The section determines all pairwise products and square differences of a
    real 4-vector q; the label fixes the trace sign, A = B + (t/4)Id has rank
    at most one, and tr B = 0.
    """
    if label not in (1, -1):
        raise ModelError("label must be +1 or -1")
    p = list(params)
    if len(p) != 9:
        raise DimensionError("matrix model requires the 9-parameter model")
    p = [Fraction(v) for v in p] if exact else [float(v) for v in p]
    x0r, x0i, x1r, x1i, x2r, x2i, z0r, z0i, _ = p
    s = label
    half = (lambda v: v / 2) if exact else (lambda v: v / 2.0)
    m0 = _hypot_scalar(x0r, x0i, exact)
    m2 = _hypot_scalar(x2r, x2i, exact)
    t = s * (m0 + m2)
    a = [[None] * 4 for _ in range(4)]
    a[0][0] = half(s * (m0 + x0r))
    a[1][1] = half(s * (m0 - x0r))
    a[2][2] = half(s * (m2 + x2r))
    a[3][3] = half(s * (m2 - x2r))
    a[0][1] = half(s * x0i)
    a[2][3] = half(-s * x2i)
    a[0][2] = half(half(2 * s * z0r - x1r))
    a[1][3] = half(half(-x1r - 2 * s * z0r))
    a[1][2] = half(half(2 * s * z0i - x1i))
    a[0][3] = half(half(2 * s * z0i + x1i))
    for i in range(4):
        for j in range(i + 1, 4):
            a[j][i] = a[i][j]
    _check_rank_one(a, tol, exact)
    quarter = t / 4 if exact else t / 4.0
    b = [[a[i][j] - (quarter if i == j else (0 if exact else 0.0))
          for j in range(4)] for i in range(4)]
    if exact:
        return b, t
    return np.array(b, dtype=float), float(t)


def _check_rank_one(a, tol, exact):
    scale = max(abs(float(a[i][j])) for i in range(4) for j in range(4))
    for i in range(4):
        for j in range(i + 1, 4):
            for k in range(4):
                for m in range(k + 1, 4):
                    minor = a[i][k] * a[j][m] - a[i][m] * a[j][k]
                    if exact:
                        if minor != 0:
                            raise ModelError(
                                "recovered products are inconsistent (2x2 minor != 0)")
                    elif abs(minor) > tol * (1.0 + scale) ** 2:
                        raise ModelError(
                            "recovered products are inconsistent beyond tolerance")


@dataclass
class MatrixOracleReport:
    a: object
    t: object
    b: object
    trace_b: object
    rank_a: int
    displayed_residual: object       # B(B + t/4 Id), equals (3t/4) A
    displayed_residual_norm: float
    product_identity_residual: object  # (B + t/4 Id)(B - 3t/4 Id)
    product_identity_norm: float


def rank_one_matrix_oracle(q) -> MatrixOracleReport:
    """Independent identities for A = q q^T, t = tr A, B = A - (t/4) Id."""
    exact = all(is_exact(v) for v in q)
    n = 4
    if len(q) != n:
        raise DimensionError("oracle expects a real 4-vector")
    q = [Fraction(v) for v in q] if exact else [float(v) for v in q]
    a = [[q[i] * q[j] for j in range(n)] for i in range(n)]
    t = sum(a[i][i] for i in range(n))
    quarter = t / 4 if exact else t / 4.0
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    b = [[a[i][j] - quarter * ident[i][j] for j in range(n)] for i in range(n)]

    def mul(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)]

    def add_scaled(x, c):
        return [[x[i][j] + c * ident[i][j] for j in range(n)] for i in range(n)]

    def frob(x):
        return math.sqrt(sum(float(x[i][j]) ** 2 for i in range(n) for j in range(n)))

    displayed = mul(b, add_scaled(b, quarter))
    fixed = mul(add_scaled(b, quarter), add_scaled(b, -3 * quarter))
    rank_a = 0 if all(v == 0 for v in q) else 1
    return MatrixOracleReport(
        a=a, t=t, b=b, trace_b=sum(b[i][i] for i in range(n)),
        rank_a=rank_a,
        displayed_residual=displayed, displayed_residual_norm=frob(displayed),
        product_identity_residual=fixed, product_identity_norm=frob(fixed))
