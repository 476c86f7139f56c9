"""Binomial steady-state descriptions, sign conditions and numeric solving."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import nnls

from . import linalg
from .cone import extreme_currents
from .errors import CapExceededError, ConvergenceError, HypothesisError
from .graph import linkage_classes, stoichiometric_subspace
from .lp import find_feasible_point
from .model import GeneralizedNetwork, Network, build_matrices, format_complex, reaction_fluxes
from .poly import Polynomial, RationalFunction, substitute_rational
from .translation import (
    Translation,
    TranslationClassification,
    check_resolvability,
    classify,
    kinetic_subspace_from_pairs,
    translated_rate_constants,
    translated_rate_constants_symbolic,
)
from .trees import tree_constants

SIGN_DIM_CAP = 12


@dataclass(frozen=True)
class Binomial:
    """coeff_pos * x**expon_pos - coeff_neg * x**expon_neg."""

    coeff_pos: Polynomial
    expon_pos: tuple[int, ...]
    coeff_neg: Polynomial
    expon_neg: tuple[int, ...]
    complexes: tuple[int, int] = (0, 0)  # (translated j, translated anchor)

    def evaluate(self, x: Sequence, rates: Mapping | None = None):
        cp = self.coeff_pos.evaluate(rates or {})
        cn = self.coeff_neg.evaluate(rates or {})
        return cp * _mono(x, self.expon_pos) - cn * _mono(x, self.expon_neg)

    def render(self, species: Sequence[str]) -> str:
        return f"({self.coeff_pos})*{_mono_str(self.expon_pos, species)} - ({self.coeff_neg})*{_mono_str(self.expon_neg, species)}"


def _mono(x, e):
    out = 1
    for xi, k in zip(x, e):
        if k:
            out = out * xi**k
    return out


def _mono_str(e, species) -> str:
    parts = [s if k == 1 else f"{s}^{k}" for s, k in zip(species, e) if k]
    return "*".join(parts) if parts else "1"


def _x_names(m: int) -> list[str]:
    return [f"x{i + 1}" for i in range(m)]


# ---------------------------------------------------------------------------
# hypotheses


def require_theorem_hypotheses(t: Translation, cls: TranslationClassification | None = None):
    """Raise HypothesisError unless the translation supports a binomial description."""
    cls = cls or classify(t)
    if not cls.strong:
        raise HypothesisError("translation is not strong (translated network not weakly reversible)")
    if cls.delta != 0:
        raise HypothesisError(f"translated structural deficiency is {cls.delta}, not 0")
    if cls.kinetic_delta != 0:
        raise HypothesisError(f"translated kinetic deficiency is {cls.kinetic_delta}, not 0")
    if not cls.proper:
        rep = check_resolvability(t, cls)
        if not rep.weakly_resolvable:
            raise HypothesisError("improper translation is not weakly resolvable")
        if not rep.strongly_resolvable:
            raise HypothesisError("improper translation is not strongly resolvable")
    return cls


# ---------------------------------------------------------------------------
# binomials


def translated_tree_constants(t: Translation, rates: Mapping | None = None) -> list:
    """Tree constants of the translated graph under the translated rates.

    Symbolic (RationalFunction entries) when ``rates`` is None, numeric
    otherwise.
    """
    K = tree_constants(t.network).per_complex
    if rates is None:
        sym = translated_rate_constants_symbolic(t)
        return [substitute_rational(p, sym) for p in K]
    kt = translated_rate_constants(t, rates)
    return [p.evaluate(kt) for p in K]


def _resolve_anchors(t: Translation, anchors) -> list[int]:
    classes = linkage_classes(t.network).classes
    if anchors is None:
        return [min(c) for c in classes]
    chosen = list(anchors.values()) if isinstance(anchors, Mapping) else list(anchors)
    out = []
    for members in classes:
        hit = [a for a in chosen if a in members]
        if len(hit) != 1:
            raise ValueError("anchors must name exactly one translated complex per linkage class")
        out.append(hit[0])
    return out


def _as_poly_pair(a, b) -> tuple[Polynomial, Polynomial]:
    """Coefficient pair proportional to (a, b) with polynomial entries."""
    if isinstance(a, RationalFunction):
        if a.den == b.den:
            return a.num, b.num
        return a.num * b.den, b.num * a.den
    if isinstance(a, Polynomial):
        return a, b
    if isinstance(a, float) or isinstance(b, float):
        return Polynomial.constant(Fraction(a)), Polynomial.constant(Fraction(b))
    return Polynomial.constant(a), Polynomial.constant(b)


def binomial_generators(t: Translation, rates: Mapping | None = None, anchors=None) -> list[Binomial]:
    """K~_a x^{y_j} - K~_j x^{y_a} for each kinetic complex j of each class.

    ``a`` is the class anchor (lowest translated index unless overridden by
    ``anchors``: one translated complex index per class).  Kinetic complexes
    are the source complexes chosen in CR_K.
    """
    require_theorem_hypotheses(t)
    K = translated_tree_constants(t, rates)
    src = t.source
    out = []
    for members, a in zip(linkage_classes(t.network).classes, _resolve_anchors(t, anchors)):
        ya = src.complexes[t.kinetic_source(a)]
        for j in members:
            if j == a:
                continue
            yj = src.complexes[t.kinetic_source(j)]
            cp, cn = _as_poly_pair(K[a], K[j])
            out.append(Binomial(cp, yj, cn, ya, (j, a)))
    return out


# ---------------------------------------------------------------------------
# parametrization


@dataclass(frozen=True)
class Parametrization:
    S: linalg.SubspaceBasis
    S_perp: linalg.SubspaceBasis
    S_tilde: linalg.SubspaceBasis
    S_tilde_perp: linalg.SubspaceBasis


def parametrization(t: Translation) -> Parametrization:
    """Exact bases of S, S^perp, S~ and S~^perp.

    Positive steady states form {x : ln x - ln x* in S~^perp}.
    """
    require_theorem_hypotheses(t)
    S = stoichiometric_subspace(t.source)
    St = kinetic_subspace_from_pairs(t)
    return Parametrization(S, linalg.orthogonal_complement(S), St, linalg.orthogonal_complement(St))


# ---------------------------------------------------------------------------
# sign vectors

Sign = tuple  # tuple of -1/0/1


def _feasible(basis, pattern: Sequence[int]) -> bool:
    d = len(basis)
    if d == 0:
        return all(p == 0 for p in pattern)
    A_eq, b_eq, A_ub, b_ub = [], [], [], []
    for i, p in enumerate(pattern):
        row = [Fraction(b[i]) for b in basis]
        if p == 0:
            A_eq.append(row)
            b_eq.append(Fraction(0))
        elif p > 0:
            A_ub.append([-v for v in row])
            b_ub.append(Fraction(-1))
        else:
            A_ub.append(row)
            b_ub.append(Fraction(-1))
    return find_feasible_point(d, A_eq, b_eq, A_ub, b_ub) is not None


def circuits(basis: linalg.SubspaceBasis) -> list[Sign]:
    """Sign vectors of the minimal-support nonzero vectors of span(basis).

    A circuit is the unique line of the subspace vanishing on some k - 1
    coordinates (k = dim), so every (k - 1)-subset is tried.
    """
    k, m = basis.dim, basis.ambient_dim
    vecs = basis.basis
    out = set()
    for zeros in itertools.combinations(range(m), k - 1) if k else ():
        ker = linalg.kernel_basis([[v[z] for v in vecs] for z in zeros], k)
        if ker.dim != 1:
            continue
        c = ker.basis[0]
        w = sign_pattern([sum(ci * v[i] for ci, v in zip(c, vecs)) for i in range(m)])
        out.add(w)
        out.add(tuple(-x for x in w))
    return sorted(out)


def _masks(v: Sequence[int]) -> tuple[int, int]:
    return sum(1 << i for i, x in enumerate(v) if x > 0), sum(1 << i for i, x in enumerate(v) if x < 0)


def sign_vectors(basis: linalg.SubspaceBasis, cap: int = SIGN_DIM_CAP) -> frozenset:
    """sigma(span): the sign vectors orthogonal to every circuit of span^perp.

    X and C are orthogonal when the products X_e C_e are all zero or take
    both signs.  Patterns are built coordinate by coordinate (as bitmasks of
    their + and - entries); a circuit is checked as soon as its last support
    coordinate is assigned.
    """
    m = basis.ambient_dim
    if m > cap:
        raise CapExceededError(f"sign enumeration needs ambient dimension <= {cap}, got {m}")
    due: list[list[tuple[int, int]]] = [[] for _ in range(m)]
    for C in circuits(linalg.orthogonal_complement(basis)):
        due[max(i for i, c in enumerate(C) if c)].append(_masks(C))
    found = []

    def rec(i: int, xp: int, xn: int):
        if i == m:
            found.append((xp, xn))
            return
        bit = 1 << i
        for yp, yn in ((xp, xn), (xp | bit, xn), (xp, xn | bit)):
            for cp, cn in due[i]:
                if bool((yp & cp) | (yn & cn)) != bool((yp & cn) | (yn & cp)):
                    break
            else:
                rec(i + 1, yp, yn)

    rec(0, 0, 0)
    return frozenset(tuple(1 if xp >> i & 1 else -1 if xn >> i & 1 else 0 for i in range(m)) for xp, xn in found)


def sign_vectors_by_lp(basis: linalg.SubspaceBasis, cap: int = SIGN_DIM_CAP) -> frozenset:
    """sigma(span) by one exact LP per sign-pattern prefix.  Much slower than
    ``sign_vectors``; kept as an independent route."""
    m = basis.ambient_dim
    if m > cap:
        raise CapExceededError(f"sign enumeration needs ambient dimension <= {cap}, got {m}")
    vecs = list(basis.basis)
    found = set()

    def rec(prefix: list[int]):
        if len(prefix) == m:
            found.add(tuple(prefix))
            return
        for s in (0, 1, -1):
            trial = prefix + [s]
            if _feasible([v[: len(trial)] for v in vecs], trial):
                rec(trial)

    rec([])
    return frozenset(found)


def sign_pattern(v: Sequence) -> Sign:
    return tuple((x > 0) - (x < 0) for x in v)


def format_sign(p: Sign) -> str:
    return "(" + ",".join("+" if s > 0 else "-" if s < 0 else "0" for s in p) + ")"


def _in_sigma(basis: linalg.SubspaceBasis, pattern: Sign) -> bool:
    return _feasible(list(basis.basis), pattern)


@dataclass(frozen=True)
class SignConditionReport:
    holds: bool
    sign_compatible: bool | None = None
    positive_conservation: bool | None = None
    witness: Sign | None = None
    note: str = ""


def uniqueness_hypothesis(
    S: linalg.SubspaceBasis,
    S_tilde: linalg.SubspaceBasis,
    cap: int = SIGN_DIM_CAP,
    preferred: Sequence[Sign] = (),
) -> SignConditionReport:
    """sigma(S) == sigma(S~) and (+,...,+) in sigma(S^perp).

    The witness is the first of ``preferred`` lying in sigma(S) but not in
    sigma(S~), else the least pattern in the symmetric difference.
    """
    sS = sign_vectors(S, cap)
    sSt = sign_vectors(S_tilde, cap)
    compatible = sS == sSt
    witness = None
    if not compatible:
        witness = next((p for p in preferred if p in sS and p not in sSt), None) or min(sS ^ sSt)
    positive = _in_sigma(linalg.orthogonal_complement(S), (1,) * S.ambient_dim)
    holds = compatible and positive
    note = (
        "exactly one toric steady state in each compatibility class"
        if holds
        else "hypothesis fails; no conclusion on the number of steady states per class"
    )
    return SignConditionReport(holds, compatible, positive, witness, note)


def multistationarity_hypothesis(
    S: linalg.SubspaceBasis, S_tilde_perp: linalg.SubspaceBasis, cap: int = SIGN_DIM_CAP
) -> SignConditionReport:
    """sigma(S) and sigma(S~^perp) share a nonzero sign vector."""
    common = sorted(p for p in sign_vectors(S, cap) & sign_vectors(S_tilde_perp, cap) if any(p))
    holds = bool(common)
    note = (
        "some rate constants give more than one toric steady state in a compatibility class"
        if holds
        else "hypothesis fails; no conclusion on multistationarity"
    )
    return SignConditionReport(holds, witness=common[0] if common else None, note=note)


def check_uniqueness_condition(t: Translation, cap: int = SIGN_DIM_CAP) -> SignConditionReport:
    """Uniqueness hypothesis for the translation; reaction vectors are preferred witnesses.

    Only the hypothesis is decided; when it fails nothing is concluded.
    """
    par = parametrization(t)
    preferred = [sign_pattern(t.source.reaction_vector(i)) for i in range(t.source.r)]
    return uniqueness_hypothesis(par.S, par.S_tilde, cap, preferred)


def check_multistationarity_condition(t: Translation, cap: int = SIGN_DIM_CAP) -> SignConditionReport:
    par = parametrization(t)
    return multistationarity_hypothesis(par.S, par.S_tilde_perp, cap)


# ---------------------------------------------------------------------------
# complex balancing


def check_complex_balanced(gnet: GeneralizedNetwork, rates: Mapping, x: Sequence, rtol: float = 1e-9) -> bool:
    """A_k Psi~(x) == 0, exactly for rational input, else to relative ``rtol``."""
    net = gnet.base
    if any(v <= 0 for v in x):
        raise ValueError("state entries must be positive")
    out = [0] * net.n
    scale = 0.0
    for rx in net.reactions:
        f = rates[rx.rate] * _mono(x, gnet.kinetic_vector(rx.reactant))
        out[rx.reactant] -= f
        out[rx.product] += f
        scale = max(scale, abs(float(f)))
    exact = all(isinstance(v, (int, Fraction)) for v in list(x) + [rates[r.rate] for r in net.reactions])
    if exact:
        return all(v == 0 for v in out)
    return max(abs(float(v)) for v in out) <= rtol * max(scale, 1e-300)


def translated_system(t: Translation, rates: Mapping) -> tuple[GeneralizedNetwork, dict]:
    """The translated generalized network (rate symbols kept) and its rates."""
    return t.translated, translated_rate_constants(t, rates)


# ---------------------------------------------------------------------------
# numeric solving


@dataclass(frozen=True)
class SolveResult:
    x: np.ndarray
    iterations: int
    residual: float


def _log_system(binomials: Sequence[Binomial], rates: Mapping | None):
    B = np.array([[p - q for p, q in zip(b.expon_pos, b.expon_neg)] for b in binomials], dtype=float)
    beta = []
    for b in binomials:
        cp = float(b.coeff_pos.evaluate(rates or {}))
        cn = float(b.coeff_neg.evaluate(rates or {}))
        beta.append(math.log(cn) - math.log(cp))
    return B, np.array(beta)


def _damped_newton(F, J, u, tol, max_iter, max_halvings):
    """Damped Newton on F(u) = 0 in log coordinates; returns (u, iterations, residual)."""
    r = F(u)
    norm = float(np.max(np.abs(r))) if r.size else 0.0
    for it in range(max_iter + 1):
        if norm < tol:
            return u, it, norm
        if it == max_iter:
            break
        try:
            step = np.linalg.solve(J(u), -r)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"singular Jacobian at iteration {it + 1}", it + 1, norm) from exc
        # shrink the whole step so no coordinate of x falls below half its value
        low = float(np.min(step)) if step.size else 0.0
        lam = min(1.0, math.log(2.0) / -low) if low < -math.log(2.0) else 1.0
        merit = float(r @ r)
        for _ in range(max_halvings):
            cand = u + lam * step
            rc = F(cand)
            if np.all(np.isfinite(rc)) and float(rc @ rc) < merit:
                break
            lam *= 0.5
        else:
            raise ConvergenceError("line search failed to reduce the residual", it + 1, norm)
        u, r, norm = cand, rc, float(np.max(np.abs(rc)))
    raise ConvergenceError(f"no convergence after {max_iter} iterations", max_iter, norm)


def solve_steady_state(
    t: Translation,
    rates: Mapping,
    x0: Sequence,
    anchors=None,
    tol: float = 1e-12,
    max_iter: int = 80,
    max_halvings: int = 30,
    restarts: int = 8,
    seed: int = 0,
) -> SolveResult:
    """Positive zero of the binomials in the compatibility class of ``x0``.

    Unknowns u = ln x.  The binomials are linear in u (B u = beta); the
    class is fixed by W x = W x0 for a basis W of S^perp.  Damped Newton:
    the step is scaled so no coordinate of x more than halves, then halved
    until the squared residual drops.

    If that fails, the binomials are solved exactly (u = u_p + N z with N a
    basis of S~^perp) and the conservation targets are moved from those of
    a nearby point to W x0 by continuation, each stage corrected by the
    same damped Newton on z.  The path is followed in both directions.
    With several steady states in a class the path from one start can fold
    back to the boundary, so up to ``restarts`` further starts are drawn
    around ln x0 from a generator seeded with ``seed``.
    """
    x0 = np.asarray([float(v) for v in x0])
    m = t.source.m
    if x0.shape[0] != m or np.any(x0 <= 0):
        raise ValueError("x0 must be a positive vector of length m")
    bins = binomial_generators(t, rates, anchors)
    B, beta = _log_system(bins, rates)
    W = np.array(linalg.orthogonal_complement(stoichiometric_subspace(t.source)).basis, dtype=float).reshape(-1, m)
    target = W @ x0
    wscale = np.abs(W) @ x0
    wscale[wscale == 0] = 1.0

    def F(u):
        return np.concatenate([B @ u - beta, (W @ np.exp(u) - target) / wscale])

    def J(u):
        return np.vstack([B, (W * np.exp(u)) / wscale[:, None]])

    rng = np.random.default_rng(seed)
    starts = [np.log(x0)] + [np.log(x0) + rng.normal(0.0, 1.0, m) for _ in range(restarts)]
    spent, first = 0, None
    for u0 in starts:
        try:
            u, its, norm = _damped_newton(F, J, u0, tol, max_iter, max_halvings)
            return SolveResult(np.exp(u), spent + its, norm)
        except ConvergenceError as exc:
            first = first or exc
            spent += exc.iterations or 0
        for direction in (1.0, -1.0):
            try:
                u, its = _continuation(B, beta, W, wscale, target, u0, tol, max_iter, max_halvings,
                                       direction=direction)
                return SolveResult(np.exp(u), spent + its, float(np.max(np.abs(F(u)))))
            except ConvergenceError as exc:
                spent += exc.iterations or 0
    raise ConvergenceError(f"{first}; continuation from {len(starts)} starts also failed", spent, first.residual)


def _tangent(Jy: np.ndarray, prev: np.ndarray | None) -> np.ndarray:
    """Unit null vector of the d x (d+1) Jacobian, oriented along ``prev``."""
    _, _, vt = np.linalg.svd(Jy)
    v = vt[-1]
    if prev is None:
        return v if v[-1] >= 0 else -v
    return v if v @ prev >= 0 else -v


def _continuation(B, beta, W, wscale, target, u_start, tol, max_iter, max_halvings, max_steps=400, direction=1.0):
    """Pseudo-arclength continuation of W exp(u_p + N z) = c(tau), tau in [0, 1].

    c(0) is the conservation vector of the point of the binomial solution
    set nearest (in log coordinates) to the start; c(1) is the target.
    Turning points in tau are followed rather than stepped over.
    """
    N = linalg_null_space(B)
    u_p = np.linalg.lstsq(B, beta, rcond=None)[0] if B.size else np.zeros(len(u_start))
    z = np.linalg.lstsq(N, u_start - u_p, rcond=None)[0]
    c0 = W @ np.exp(u_p + N @ z)
    dc = (target - c0) / wscale

    def H(y):
        return (W @ np.exp(u_p + N @ y[:-1]) - c0) / wscale - y[-1] * dc

    def JH(y):
        return np.hstack([((W * np.exp(u_p + N @ y[:-1])) @ N) / wscale[:, None], -dc[:, None]])

    y = np.append(z, 0.0)
    tan = direction * _tangent(JH(y), None)
    h, total = 0.25, 0
    for _ in range(max_steps):
        pred = y + h * tan
        cur, ok = pred, False
        for _ in range(12):
            r = np.append(H(cur), tan @ (cur - pred))
            if not np.all(np.isfinite(r)):
                break
            if np.max(np.abs(r)) < 1e-10:
                ok = True
                break
            try:
                cur = cur - np.linalg.solve(np.vstack([JH(cur), tan]), r)
            except np.linalg.LinAlgError:
                break
            total += 1
        if not ok:
            h /= 2
            if h < 1e-10:
                raise ConvergenceError("continuation step became too small", total, None)
            continue
        if cur[-1] >= 1.0:
            # interpolate onto tau = 1 and polish there
            frac = (1.0 - y[-1]) / (cur[-1] - y[-1])
            z1 = y[:-1] + frac * (cur[:-1] - y[:-1])

            def G(zz):
                return H(np.append(zz, 1.0))

            def JG(zz):
                return JH(np.append(zz, 1.0))[:, :-1]

            try:
                z1, its, _ = _damped_newton(G, JG, z1, tol, max_iter, max_halvings)
            except ConvergenceError:
                h /= 2
                continue
            return u_p + N @ z1, total + its
        tan = _tangent(JH(cur), tan)
        y = cur
        h = min(2 * h, 1.0)
    raise ConvergenceError("continuation did not reach the target class", total, None)


def linalg_null_space(B: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of ker B."""
    if B.size == 0:
        return np.eye(B.shape[1])
    _, sv, vt = np.linalg.svd(B)
    rank = int(np.sum(sv > sv.max() * 1e-12)) if sv.size else 0
    return vt[rank:].T


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class ResidualReport:
    residual_inf: float
    relative_residual: float
    per_species: tuple[float, ...]
    decomposes: bool
    weights: tuple[float, ...] = field(default=())
    decomposition_residual: float = 0.0


def verify_steady_state(net: Network, rates: Mapping, x: Sequence, rtol: float = 1e-8) -> ResidualReport:
    """Gamma R(x) residuals and a nonnegative decomposition of R(x) over extreme currents."""
    xf = [float(v) for v in x]
    kf = {k: float(v) for k, v in rates.items()}
    R = np.array(reaction_fluxes(net, kf, xf))
    G = np.array(build_matrices(net).Gamma, dtype=float)
    res = G @ R
    scale = float(np.max(np.abs(np.abs(G) @ R))) or 1.0
    rays = extreme_currents(net)
    if rays:
        E = np.array([e.vector for e in rays], dtype=float).T
        w, dres = nnls(E, R)
    else:
        w, dres = np.zeros(0), float(np.linalg.norm(R))
    rnorm = float(np.linalg.norm(R)) or 1.0
    return ResidualReport(
        residual_inf=float(np.max(np.abs(res))),
        relative_residual=float(np.max(np.abs(res))) / scale,
        per_species=tuple(float(v) for v in res),
        decomposes=dres <= rtol * rnorm,
        weights=tuple(float(v) for v in w),
        decomposition_residual=float(dres),
    )


def describe_binomials(t: Translation, binomials: Sequence[Binomial]) -> list[str]:
    names = _x_names(t.source.m)
    return [b.render(names) for b in binomials]


__all__ = [
    "Binomial",
    "Parametrization",
    "ResidualReport",
    "SignConditionReport",
    "SolveResult",
    "binomial_generators",
    "check_complex_balanced",
    "check_multistationarity_condition",
    "check_uniqueness_condition",
    "describe_binomials",
    "multistationarity_hypothesis",
    "uniqueness_hypothesis",
    "format_complex",
    "format_sign",
    "parametrization",
    "require_theorem_hypotheses",
    "sign_pattern",
    "sign_vectors",
    "solve_steady_state",
    "translated_system",
    "translated_tree_constants",
    "verify_steady_state",
]
