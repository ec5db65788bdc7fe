"""From curve data to rational representations of isogenies.

Assembles the Jacobian differential system at a base point Q (formal
parameter t = u - u_Q), solves it with the Newton solver, reconstructs the
symmetric components sigma_i and rho_i/v as rational fractions in u over
the residue field, and verifies multiplication-by-ell representations
against independent Cantor arithmetic.

Multiplication mode expands the map Q -> [ell]([Q - inf]) + T where T is a
two-torsion class (a Galois-stable set of Weierstrass points, Hensel-lifted
to the working precision).  The untranslated image has repeated support
whenever ell <= g, which makes H(0) singular; a two-torsion shift of size
|S| >= g + 1 - ell removes the degeneracy while keeping the hyperelliptic
symmetry Phi(iota Q) = -Phi(Q) (2T = 0), so sigma_i and rho_i/v stay
rational in u, the normalization matrix stays ell * I, and the degree
bounds are unchanged (translation preserves algebraic equivalence).  The
verification oracle applies the same shift.  For ell > g no shift is
needed and none is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import polys as P
from .curves import (CurvePoint, HyperellipticCurve, MumfordDivisor,
                     cantor_add, divisor_from_point, divisor_points,
                     embed_poly, hensel_lift_factor, random_curve, scalar_mul)
from .errors import (DegreeError, GenericityError, NonUnitInversionError,
                     NotInvertibleError, PadicError, ReconstructionError,
                     RepeatedRootError, WeierstrassError)
from .linalg import SeriesVector
from .ode import HyperellipticH, OdeProblem, diff_solve, required_precision
from .padic import PadicContext, PadicElement
from .reconstruct import pade_reconstruct
from .series import TruncSeries, compose, newton_inverse, newton_sqrt

RETRY_LIMIT = 10


@dataclass
class DegreeBounds:
    ell_eff: int
    sigma: int                  # bound for each sigma_i numerator/denominator
    rho: list                   # bound for rho_i/v, i = 1..g
    series_order: int           # default n = 2*max_bound + 2

    @property
    def max_bound(self):
        return max([self.sigma] + list(self.rho))


def degree_bounds(mode: str, g: int, ell: int, degf2: int) -> DegreeBounds:
    """Degree bounds for the rational representation of an (ell,..,ell)
    isogeny ('supplied') or of multiplication-by-ell ('mult', where the
    pullback of the theta divisor is ell^2 * Theta)."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    ell_eff = ell * ell if mode == "mult" else ell
    sigma = g * ell_eff
    odd = degf2 == 2 * g + 1
    rho = [(2 * i + 1 if odd else 2 * i + 2) * g * ell_eff + 3 for i in range(1, g + 1)]
    n = 2 * max([sigma] + rho) + 2
    return DegreeBounds(ell_eff=ell_eff, sigma=sigma, rho=rho, series_order=n)


@dataclass
class IsogenyProblem:
    ctx: PadicContext                  # base context at the working precision
    curve1: HyperellipticCurve
    curve2: HyperellipticCurve
    norm_matrix: list                  # g x g grid of PadicElements
    Q: CurvePoint                      # base point on curve1, non-Weierstrass
    initial_divisor: MumfordDivisor    # image class on J(curve2), weight g
    ell: int
    mode: str = "supplied"             # 'mult' | 'supplied'
    n: int = 0
    N: int = 1
    torsion_shift: object = None       # two-torsion MumfordDivisor or None
    transpose_G: bool = False          # index convention of the G rows


@dataclass
class SolvedSystem:
    prob: IsogenyProblem
    ext: PadicContext
    x0: list
    y0: list
    v: TruncSeries            # v(t) over the base context, order n+1
    x: list                   # g series over ext, order n+1
    y: list                   # g series over ext, order n+1
    hinv: object


def build_system(prob: IsogenyProblem, rng=None):
    """(evaluator H, right-hand side G, ext context, support points).

    G_i(t) = (sum_k m_{ik} u(t)^{k-1}) / v(t) with u(t) = u_Q + t and
    v = sqrt(f1(u_Q + t)) anchored at v_Q; set transpose_G to read the
    normalization matrix by columns instead.
    """
    ctx = prob.ctx
    g = prob.curve1.g
    n = prob.n
    uQ, vQ = prob.Q.x, prob.Q.y
    if not vQ.is_unit():
        raise WeierstrassError("base point Q must be non-Weierstrass")
    f1_shift = P.pshift(ctx, prob.curve1.f, uQ)
    v = newton_sqrt(TruncSeries.from_poly(ctx, f1_shift, n + 1), vQ)
    vinv = newton_inverse(v)
    ext, pts = divisor_points(prob.curve2, prob.initial_divisor, rng)
    x0 = [pt.x for pt in pts]
    y0 = [pt.y for pt in pts]
    rows = []
    for i in range(g):
        mrow = [prob.norm_matrix[k][i] if prob.transpose_G else prob.norm_matrix[i][k]
                for k in range(g)]
        mpoly = P.as_poly(ctx, mrow)            # sum_k m_k X^{k-1}
        num = P.pshift(ctx, mpoly, uQ)          # evaluated at u = u_Q + t
        Gi = TruncSeries.from_poly(ctx, num, n + 1) * vinv
        rows.append(Gi.truncate(n).embed(ext))
    G = SeriesVector(rows)
    f2_ext = embed_poly(ctx, ext, prob.curve2.f)
    H = HyperellipticH(ext, f2_ext, x0, y0)
    return H, G, ext, pts, v


def solve_isogeny(prob: IsogenyProblem, rng=None) -> SolvedSystem:
    """Solve the system and return the 2g coordinate series mod
    (p^M, t^{n+1}), with y_j anchored at y_j(0)."""
    H, G, ext, pts, v = build_system(prob, rng)
    g = prob.curve1.g
    chi, hinv = diff_solve(OdeProblem(G=G, H=H, g=g, n=prob.n, N=prob.N))
    xs, ys = [], []
    for j in range(g):
        xj = chi[j] + TruncSeries.constant(pts[j].x, prob.n + 1)
        yj = newton_sqrt(compose(H.shifted[j], chi[j]), pts[j].y)
        xs.append(xj)
        ys.append(yj)
    return SolvedSystem(prob=prob, ext=ext, x0=[p_.x for p_ in pts],
                        y0=[p_.y for p_ in pts], v=v, x=xs, y=ys, hinv=hinv)


@dataclass
class RationalRepresentation:
    """sigma_i and rho_i/v as coprime fractions in u over F_p, plus the
    data needed to verify them (mode, ell, the two-torsion shift)."""
    p: int
    g: int
    ell: int
    mode: str
    sigma: list                 # [(num, den)] poly arrays over F_p
    rho_over_v: list            # [(num, den)] or None per component
    status: list                # per-component notes ('ok' / reason)
    two_torsion: list = field(default_factory=list)  # U_T residue coeffs, [] = none
    curve_f: list = field(default_factory=list)      # residue coefficients

    def to_json(self):
        def frac(pair):
            if pair is None:
                return None
            return {"numerator": P.poly_to_json(pair[0], 1),
                    "denominator": P.poly_to_json(pair[1], 1)}
        return {
            "p": str(self.p), "g": self.g, "ell": self.ell, "mode": self.mode,
            "sigma": [frac(s) for s in self.sigma],
            "rho_over_v": [frac(r) for r in self.rho_over_v],
            "status": self.status,
            "two_torsion": list(self.two_torsion),
            "curve_f": list(self.curve_f),
        }

    @classmethod
    def from_json(cls, data):
        p = int(data["p"])
        ctx = PadicContext(p, 1)

        def unfrac(d):
            if d is None:
                return None
            return (P.poly_from_json(ctx, d["numerator"]),
                    P.poly_from_json(ctx, d["denominator"]))
        return cls(p=p, g=data["g"], ell=data["ell"], mode=data["mode"],
                   sigma=[unfrac(s) for s in data["sigma"]],
                   rho_over_v=[unfrac(r) for r in data["rho_over_v"]],
                   status=list(data["status"]),
                   two_torsion=list(data["two_torsion"]),
                   curve_f=list(data["curve_f"]))


def symmetric_series(solved: SolvedSystem):
    """(sigma_i(t))_i and (rho_i(t))_i from the coordinate series:
    prod_j (X - x_j) = X^g + sigma_1 X^{g-1} + ... + sigma_g and V(X) the
    Lagrange interpolant through (x_j, y_j)."""
    ext = solved.ext
    g = solved.prob.curve1.g
    n1 = solved.x[0].order
    one = TruncSeries.constant(ext.one(), n1)
    # U(X, t): list of X-coefficients, low degree first
    ucoeffs = [one]
    for xj in solved.x:
        nxt = [(-xj) * ucoeffs[0]]
        for k in range(1, len(ucoeffs)):
            nxt.append(ucoeffs[k - 1] - xj * ucoeffs[k])
        nxt.append(ucoeffs[-1])
        ucoeffs = nxt
    sigmas = [ucoeffs[g - i] for i in range(1, g + 1)]
    # V(X, t) by Lagrange interpolation in X over the series ring
    vcoeffs = [TruncSeries.zero(ext, n1) for _ in range(max(g, 1))]
    for j in range(g):
        wj = solved.y[j]
        for i in range(g):
            if i == j:
                continue
            wj = wj * newton_inverse(solved.x[j] - solved.x[i])
        numer = [one]
        for i in range(g):
            if i == j:
                continue
            nxt = [(-solved.x[i]) * numer[0]]
            for k in range(1, len(numer)):
                nxt.append(numer[k - 1] - solved.x[i] * numer[k])
            nxt.append(numer[-1])
            numer = nxt
        for k in range(len(numer)):
            vcoeffs[k] = vcoeffs[k] + numer[k] * wj
    rhos = [vcoeffs[g - i] for i in range(1, g + 1)]
    return sigmas, rhos


def _descend_to_base_residue(series: TruncSeries) -> TruncSeries:
    """Reduce mod p and check the result lies in F_p (the symmetric
    combinations of Galois-stable support must)."""
    res = series.to_precision(1)
    if res.ctx.d > 1:
        if res.coeffs[:, 1:].any():
            raise ReconstructionError(
                "symmetric series does not descend to the base residue field")
        base = PadicContext(res.ctx.p, 1)
        return TruncSeries(base, np.ascontiguousarray(res.coeffs[:, :1]))
    return res


def reconstruct_representation(solved: SolvedSystem, fast: bool = True) -> RationalRepresentation:
    """Pade-reconstruct each component over F_p and rewrite it in u.

    A component whose stated degree bound does not fit the available series order is
    attempted at the largest feasible symmetric bound; failures are recorded
    in `status` instead of aborting the others.
    """
    prob = solved.prob
    g = prob.curve1.g
    ctx = prob.ctx
    bounds = degree_bounds(prob.mode, g, prob.ell, P.pdeg(prob.curve2.f))
    sigmas, rhos = symmetric_series(solved)
    vext = solved.v.embed(solved.ext)
    vinv = newton_inverse(vext)
    alphas = [rho * vinv for rho in rhos]
    res = PadicContext(ctx.p, 1)
    uQ_res = res.element(int(prob.Q.x.coeffs[0]))
    avail = solved.x[0].order
    feasible = (avail - 1) // 2

    def attempt(series, bound):
        s = _descend_to_base_residue(series)
        b = min(bound, feasible)
        N, D = pade_reconstruct(s, b, b, fast=fast)
        num = P.pshift(res, N, -uQ_res)
        den = P.pshift(res, D, -uQ_res)
        lc = P.plc(res, den)
        num = P.pscale(res, num, lc.inverse())
        den = P.pscale(res, den, lc.inverse())
        note = "ok" if bound <= feasible else "ok (bound clipped to feasible order)"
        return (num, den), note

    sigma_out, alpha_out, status = [], [], []
    for i in range(g):
        try:
            pair, note = attempt(sigmas[i], bounds.sigma)
            sigma_out.append(pair)
            status.append(f"sigma_{i + 1}: {note}")
        except (ReconstructionError, ValueError) as exc:
            sigma_out.append(None)
            status.append(f"sigma_{i + 1}: failed ({exc})")
    for i in range(g):
        try:
            pair, note = attempt(alphas[i], bounds.rho[i])
            alpha_out.append(pair)
            status.append(f"rho_{i + 1}/v: {note}")
        except (ReconstructionError, ValueError) as exc:
            alpha_out.append(None)
            status.append(f"rho_{i + 1}/v: failed ({exc})")
    shift = []
    if prob.torsion_shift is not None:
        shift = [str(int(c) % ctx.p) for c in prob.torsion_shift.U[:, 0]]
    return RationalRepresentation(
        p=ctx.p, g=g, ell=prob.ell, mode=prob.mode,
        sigma=sigma_out, rho_over_v=alpha_out, status=status, two_torsion=shift,
        curve_f=[str(int(c) % ctx.p) for c in prob.curve1.f[:, 0]])


def _eval_frac(res, pair, u):
    num, den = pair
    dv = P.peval(res, den, u)
    if dv.is_zero():
        return None
    return P.peval(res, num, u) / dv


def verify_representation(rep: RationalRepresentation, curve: HyperellipticCurve,
                          ell: int, trials: int, rng=None) -> dict:
    """Check the representation against Cantor arithmetic at random points.

    For each sampled affine Q' on the residue curve, the oracle divisor is
    [ell]([Q' - inf]) + T (T the representation's two-torsion shift) and its
    Mumford coefficients are compared with the evaluated fractions; returns
    pass/fail counts and the first counterexample.  Samples hitting a pole
    or a weight-deficient class are skipped (outside the representation's
    domain).
    """
    if rng is None:
        rng = np.random.default_rng(0)
    res = curve.ctx
    if res.M != 1:
        raise ValueError("verification runs over the residue field")
    g = curve.g
    shift = MumfordDivisor.identity(curve)
    if rep.two_torsion:
        shift = MumfordDivisor(curve, P.as_poly(res, [int(c) for c in rep.two_torsion]),
                               P.pzero(res))
    passes = fails = skipped = 0
    first_failure = None
    attempts = 0
    while passes + fails < trials and attempts < 60 * max(trials, 1):
        attempts += 1
        try:
            Qp = curve.random_affine_point(rng)
        except WeierstrassError:
            break
        u1 = res.element(int(Qp.x.coeffs[0]))
        v1 = Qp.y
        try:
            D = cantor_add(curve, scalar_mul(curve, ell, divisor_from_point(curve, Qp)), shift)
        except NonUnitInversionError:
            skipped += 1
            continue
        if P.pdeg(D.U) != g:
            skipped += 1
            continue
        svals = [(_eval_frac(res, rep.sigma[i], u1) if rep.sigma[i] else None)
                 for i in range(g)]
        avals = [(_eval_frac(res, rep.rho_over_v[i], u1) if rep.rho_over_v[i] else None)
                 for i in range(g)]
        if any(v is None for v in svals) or any(v is None for v in avals):
            skipped += 1
            continue
        ok = True
        detail = []
        for i in range(1, g + 1):
            uc = P.pcoeff(res, D.U, g - i)
            if uc != svals[i - 1]:
                ok = False
                detail.append(f"sigma_{i}: expected {uc!r}, got {svals[i - 1]!r}")
            vc = P.pcoeff(res, D.V, g - i)
            if vc != avals[i - 1] * v1:
                ok = False
                detail.append(f"rho_{i}: expected {vc!r}, got {(avals[i - 1] * v1)!r}")
        if ok:
            passes += 1
        else:
            fails += 1
            if first_failure is None:
                first_failure = {"u": int(u1.coeffs[0]), "v": int(v1.coeffs[0]),
                                 "detail": detail}
    return {"trials": passes + fails, "passes": passes, "fails": fails,
            "skipped": skipped, "first_failure": first_failure}


def _shift_sizes(g: int, ell: int):
    """Admissible total degrees |S| of the two-torsion shift: the image
    [ell](Q - inf) + T_S is structurally degenerate unless ell + |S| > g,
    or the support is the bare point (ell = 1, |S| = 0, g = 1)."""
    if ell > g or (ell == 1 and g == 1):
        return [0]
    return list(range(g + 1 - ell, g + 1))


def _torsion_subsets(factors, sizes):
    """All factor subsets whose degrees sum to an admissible size."""
    from itertools import combinations
    out = []
    for r in range(1, len(factors) + 1):
        for combo in combinations(range(len(factors)), r):
            s = sum(factors[i].shape[0] - 1 for i in combo)
            if s in sizes:
                out.append(combo)
    return out


def multiplication_problem(p: int, g: int, ell: int, rng, N: int = 1,
                           order=None, precision=None, curve_f=None) -> IsogenyProblem:
    """Assemble a multiplication-by-ell problem over a random (or given)
    curve, retrying the base point and the two-torsion shift until the
    configuration is generic (weight g, distinct affine non-Weierstrass
    support)."""
    res = PadicContext(p, 1)
    bounds = degree_bounds("mult", g, ell, 2 * g + 1)
    n = order if order is not None else bounds.series_order
    M = precision if precision is not None else required_precision(p, N, n)
    ctx = PadicContext(p, M)
    sizes = _shift_sizes(g, ell)
    need_shift = sizes != [0]
    ident = [[ctx.element(ell) if i == j else ctx.zero() for j in range(g)]
             for i in range(g)]
    last = None
    curve = None
    for attempt in range(4 * RETRY_LIMIT):
        try:
            # small residue fields exhaust their generic points quickly, so
            # random curves are re-drawn every few attempts
            if curve is None or (curve_f is None and attempt % 3 == 0 and attempt):
                if curve_f is not None:
                    curve = HyperellipticCurve(ctx, P.poly_from_json(ctx, curve_f))
                else:
                    curve = random_curve(ctx, g, rng)
                subsets = []
                factors = []
                if need_shift:
                    fbar = P.as_poly(res, curve.f % p)
                    factors = P.factor_squarefree(res, fbar, rng)
                    subsets = _torsion_subsets(factors, sizes)
                    if not subsets:
                        if curve_f is not None:
                            raise GenericityError(
                                "the curve has no rational two-torsion of size "
                                f"{sizes}; multiplication by {ell} <= g = {g} needs one")
                        curve = None
                        continue
            Q = curve.random_affine_point(rng)
            shift_div = None
            if need_shift:
                combo = subsets[int(rng.integers(0, len(subsets)))]
                ut_bar = P.pone(res)
                for i in combo:
                    ut_bar = P.pmul(res, ut_bar, factors[i])
                ut = hensel_lift_factor(ctx, curve.f, ut_bar % ctx.modulus)
                shift_div = MumfordDivisor(curve, ut, P.pzero(ctx))
            D = scalar_mul(curve, ell, divisor_from_point(curve, Q))
            if shift_div is not None:
                D = cantor_add(curve, D, shift_div)
            if P.pdeg(D.U) != g:
                raise DegreeError(f"image class has weight {P.pdeg(D.U)} < {g}")
            prob = IsogenyProblem(ctx=ctx, curve1=curve, curve2=curve,
                                  norm_matrix=ident, Q=Q, initial_divisor=D,
                                  ell=ell, mode="mult", n=n, N=N,
                                  torsion_shift=shift_div)
            # fail fast on non-generic support
            divisor_points(curve, D, np.random.default_rng(int(rng.integers(1 << 30))))
            return prob
        except (DegreeError, RepeatedRootError, WeierstrassError,
                NonUnitInversionError, NotInvertibleError) as exc:
            last = exc
    raise GenericityError(f"no generic configuration after {4 * RETRY_LIMIT} tries: {last}")


def supplied_problem(p: int, N: int, curve1_f, curve2_f, norm_matrix,
                     base_point, initial_points=None, initial_divisor=None,
                     ell: int = 1, order=None, precision=None,
                     transpose_G: bool = False) -> IsogenyProblem:
    """Assemble a supplied-isogeny problem: domain/codomain curves, the
    normalization matrix, the base point Q and the image class of [Q - inf]
    (as a Mumford pair or as its g support points) are all given; ell only
    feeds the degree bounds."""
    g = (len(curve1_f) - 2) // 2
    bounds = degree_bounds("supplied", g, ell, len(curve2_f) - 1)
    n = order if order is not None else bounds.series_order
    M = precision if precision is not None else required_precision(p, N, n)
    ctx = PadicContext(p, M)
    curve1 = HyperellipticCurve(ctx, P.poly_from_json(ctx, curve1_f))
    curve2 = HyperellipticCurve(ctx, P.poly_from_json(ctx, curve2_f))
    matrix = [[ctx.element(int(v)) for v in row] for row in norm_matrix]
    uQ = ctx.element(int(base_point[0]))
    vQ = ctx.element(int(base_point[1]))
    if vQ * vQ != P.peval(ctx, curve1.f, uQ):
        raise ValueError("base point does not satisfy the domain curve equation")
    Q = CurvePoint(uQ, vQ)
    if initial_divisor is not None:
        U = P.poly_from_json(ctx, initial_divisor["u"])
        V = P.poly_from_json(ctx, initial_divisor["v"])
    elif initial_points is not None:
        xs = [ctx.element(int(x)) for x, _ in initial_points]
        ys = [ctx.element(int(y)) for _, y in initial_points]
        U = P.pone(ctx)
        for x in xs:
            U = P.pmul(ctx, U, P.as_poly(ctx, [-x, ctx.one()]))
        V = P.pinterp(ctx, xs, ys)
    else:
        raise ValueError("either initial_points or initial_divisor is required")
    D = MumfordDivisor(curve2, U, V)   # validates V^2 = f2 mod U exactly
    return IsogenyProblem(ctx=ctx, curve1=curve1, curve2=curve2,
                          norm_matrix=matrix, Q=Q, initial_divisor=D,
                          ell=ell, mode="supplied", n=n, N=N,
                          transpose_G=transpose_G)


def run_supplied(seed: int = 0, fast: bool = True, **kwargs):
    """End-to-end supplied-isogeny pipeline; returns (problem, solved,
    representation)."""
    prob = supplied_problem(**kwargs)
    solved = solve_isogeny(prob, np.random.default_rng(seed))
    rep = reconstruct_representation(solved, fast=fast)
    return prob, solved, rep


def run_multiplication(p: int, g: int, ell: int, seed: int, N: int = 1,
                       order=None, precision=None, fast: bool = True,
                       trials: int = 0):
    """End-to-end multiplication-by-ell pipeline; returns
    (problem, solved, representation, verification-or-None)."""
    rng = np.random.default_rng(seed)
    last = None
    for _ in range(RETRY_LIMIT):
        try:
            prob = multiplication_problem(p, g, ell, rng, N=N, order=order,
                                          precision=precision)
            solved = solve_isogeny(prob, np.random.default_rng(int(rng.integers(1 << 30))))
            rep = reconstruct_representation(solved, fast=fast)
            break
        except (PadicError, ValueError) as exc:
            last = exc
    else:
        raise GenericityError(f"pipeline failed after {RETRY_LIMIT} tries: {last}")
    verification = None
    if trials > 0:
        verification = verify_representation(
            rep, prob.curve1.reduce_mod_p(), ell, trials,
            np.random.default_rng(seed + 1))
    return prob, solved, rep, verification
