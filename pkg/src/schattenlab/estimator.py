"""Reproducible adversarial search over the inequality ratio objectives.

Instances are generated deterministically from a seed, hill-climbed with
multiplicative log-space perturbations of spectra and additive
perturbations of the off-diagonal element, and the best witness is
reported with a monotone improvement trace.  Identical inputs give
byte-identical reports; parallel workers merge in start-index order so the
worker count never changes the result.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .kernels import TMapParams, rx_kernel, t_map
from .matcore import PositiveDefiniteMatrix, ValidationError
from .mazur import (eq1_ratio, interp_corollary_ratio, main_ratio,
                    mazur_lipschitz_ratio, powers_diff_ratio)
from .schatten import (ExponentConfig, schatten_norm,
                       schatten_norm_from_singular_values, singular_values)
from .strip import AnalyticFamily, BoundaryGridCache, convexity_defect

SPECTRUM_LAWS = ("log-uniform", "clustered-pairs", "geometric")
X_LAWS = ("gaussian-complex", "hermitian-gaussian", "rank-one", "unitary")

LOG_SPEC_RANGE = math.log(1e3)   # spectra drawn log-uniform over [1e-3, 1e3]
LOG_SPEC_CLIP = 8.0              # hill climbing keeps log-eigenvalues in [-8, 8]

DEFAULT_SCHEDULE = (0.5, 1e-3)   # geometric step decay over the budget


@dataclass(frozen=True)
class InstanceSpec:
    """Deterministic recipe for one random instance family."""

    dim: int
    spectrum_law: str = "log-uniform"
    x_law: str = "gaussian-complex"
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.dim <= 64:
            raise ValidationError("dim must be in [1, 64], got %r" % (self.dim,))
        if self.spectrum_law not in SPECTRUM_LAWS:
            raise ValidationError("unknown spectrum law %r" % (self.spectrum_law,))
        if self.x_law not in X_LAWS:
            raise ValidationError("unknown x law %r" % (self.x_law,))


@dataclass
class RatioReport:
    """Outcome of one adversarial search."""

    objective_id: str
    exponents: dict
    best_ratio: float
    witness: dict
    trace: list                  # [[iteration, ratio], ...], monotone
    seed: int
    flagged_instances: int
    flagged_witnesses: list
    starts: int
    budget: int
    spec: dict
    direction: str

    def plateau_improvement(self):
        """Relative improvement over the final quarter of the trace."""
        if self.budget == 0 or not self.trace:
            return 0.0
        cut = 0.75 * self.budget
        at_cut = self.trace[0][1]
        for it, val in self.trace:
            if it <= cut:
                at_cut = val
            else:
                break
        final = self.trace[-1][1]
        if at_cut == 0.0:
            return math.inf if final != at_cut else 0.0
        return abs(final - at_cut) / abs(at_cut)

    def to_dict(self):
        return {
            "objective_id": self.objective_id,
            "exponents": self.exponents,
            "best_ratio": self.best_ratio,
            "witness": self.witness,
            "trace": self.trace,
            "seed": self.seed,
            "flagged_instances": self.flagged_instances,
            "flagged_witnesses": self.flagged_witnesses,
            "starts": self.starts,
            "budget": self.budget,
            "spec": self.spec,
            "direction": self.direction,
            "plateau_improvement": self.plateau_improvement(),
        }


def _rng_for(seed, start_index):
    return np.random.default_rng(np.random.SeedSequence(entropy=seed,
                                                        spawn_key=(start_index,)))


def _complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def _haar_unitary(rng, n):
    z = _complex_gaussian(rng, (n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _draw_log_spectrum(rng, dim, law):
    if law == "log-uniform":
        return rng.uniform(-LOG_SPEC_RANGE, LOG_SPEC_RANGE, dim)
    if law == "clustered-pairs":
        half = (dim + 1) // 2
        base = rng.uniform(-LOG_SPEC_RANGE, LOG_SPEC_RANGE, half)
        out = np.empty(dim)
        out[:half] = base
        jitter = rng.uniform(-1e-10, 1e-10, dim - half)
        out[half:] = base[:dim - half] + jitter
        return out
    if law == "geometric":
        start = rng.uniform(-LOG_SPEC_RANGE, 0.0)
        step = rng.uniform(0.05, 2.0 * LOG_SPEC_RANGE / max(dim, 2))
        return start + step * np.arange(dim)
    raise ValidationError("unknown spectrum law %r" % (law,))


def _draw_x(rng, dim, law):
    if law == "gaussian-complex":
        return _complex_gaussian(rng, (dim, dim))
    if law == "hermitian-gaussian":
        a = _complex_gaussian(rng, (dim, dim))
        return 0.5 * (a + a.conj().T)
    if law == "rank-one":
        u = _complex_gaussian(rng, (dim, 1))
        v = _complex_gaussian(rng, (dim, 1))
        return u @ v.conj().T
    if law == "unitary":
        return _haar_unitary(rng, dim)
    raise ValidationError("unknown x law %r" % (law,))


def random_instance(spec):
    """(d, x) drawn deterministically from the spec."""
    rng = _rng_for(spec.seed, 0)
    logspec = _draw_log_spectrum(rng, spec.dim, spec.spectrum_law)
    u = _haar_unitary(rng, spec.dim)
    d = PositiveDefiniteMatrix.from_spectral(np.exp(logspec), u)
    x = _draw_x(rng, spec.dim, spec.x_law)
    return d, x


# --- objective machinery -------------------------------------------------

def _normalized_pdm(logspec, unitary, s):
    """Positive matrix from log-spectrum and unitary, scaled to ||d||_s = 1."""
    lam = np.exp(np.clip(logspec, -LOG_SPEC_CLIP, LOG_SPEC_CLIP))
    norm = schatten_norm_from_singular_values(np.sort(lam)[::-1], s)
    return PositiveDefiniteMatrix.from_spectral(lam / norm, unitary)


def _tmap_ratio(d, params, delta, p, q, s):
    num = schatten_norm(t_map(d, params, delta), q)
    den = schatten_norm(delta, p) * schatten_norm(d.mat, s) ** params.alpha
    if num == 0.0 and den == 0.0:
        return 0.0
    if den <= 1e-13 * max(num, 1e-14):
        return math.inf
    return num / den


def _triangular_ratio(d, x, p):
    num = schatten_norm(x @ d.mat, p)
    den = schatten_norm(d.mat @ x + x @ d.mat, p)
    if num == 0.0 and den == 0.0:
        return 0.0
    if den <= 1e-13 * max(num, 1e-14):
        return math.inf
    return num / den


def _rx_ratio(logspec, x, alpha):
    lam = np.exp(np.clip(logspec, -LOG_SPEC_CLIP, LOG_SPEC_CLIP))
    k = rx_kernel(lam, alpha)
    num = schatten_norm(k * x, math.inf)
    den = schatten_norm(x, math.inf)
    if den == 0.0:
        return 0.0
    return num / den


class _Objective:
    """One registered ratio objective: state layout plus evaluation."""

    def __init__(self, kind, direction, make_eval):
        self.kind = kind            # "dx", "pair-pos", "pair-gen", "rx", "family"
        self.direction = direction  # "max" or "min"
        self.make_eval = make_eval  # params dict -> callable(state) -> float


def _make_main(params):
    cfg = ExponentConfig(params["alpha"], params["s"], params["r"])
    return lambda st: main_ratio(_normalized_pdm(st["logspec"], st["unitary"], cfg.s),
                                 st["x"], cfg)


def _make_interp(params):
    eps, s, r = params["eps"], params["s"], params["r"]
    return lambda st: interp_corollary_ratio(
        _normalized_pdm(st["logspec"], st["unitary"], s), st["x"], eps, s, r)


def _make_eq1(sign):
    def make(params):
        p, q = params["p"], params["q"]
        return lambda st: eq1_ratio(_normalized_pdm(st["logspec"], st["unitary"], p),
                                    st["x"], p, q, sign)
    return make


def _make_eq2(params):
    p, q = params["p"], params["q"]

    def ev(st):
        x = _normalized_pdm(st["logspec"], st["unitary"], p)
        y = _normalized_pdm(st["logspec2"], st["unitary2"], p)
        if np.abs(x.mat - y.mat).max() < 1e-14:
            return 0.0
        return powers_diff_ratio(x, y, p, q)
    return ev


def _make_mazur(variant):
    def make(params):
        p, q = params["p"], params["q"]

        def ev(st):
            if np.abs(st["x"] - st["y"]).max() < 1e-14:
                return 0.0
            return mazur_lipschitz_ratio(st["x"], st["y"], p, q, variant=variant)
        return ev
    return make


def _make_tmap(params):
    tp = TMapParams(params["beta"], params["gamma"])
    s, r = params["s"], params["r"]
    inv_r = 0.0 if math.isinf(r) else 1.0 / r
    p = 1.0 / (1.0 / s + inv_r)
    q = 1.0 / ((1.0 + tp.alpha) / s + inv_r)
    return lambda st: _tmap_ratio(_normalized_pdm(st["logspec"], st["unitary"], s),
                                  tp, st["x"], p, q, s)


def _make_triangular(params):
    p = params["p"]
    return lambda st: _triangular_ratio(
        _normalized_pdm(st["logspec"], st["unitary"], p), st["x"], p)


def _make_rx(params):
    alpha = params["alpha"]
    return lambda st: _rx_ratio(st["logspec"], st["x"], alpha)


def _make_defect_min(params):
    alpha, q = params["alpha"], params["q"]
    gamma0 = params.get("gamma0", alpha / (1.0 + alpha))

    def ev(st):
        d = _normalized_pdm(st["logspec"], st["unitary"], 2.0)
        fam = AnalyticFamily(d, st["x"], alpha)
        try:
            return convexity_defect(fam, gamma0, q,
                                    BoundaryGridCache(fam, gamma0))
        except ValidationError:
            return math.inf  # degenerate family: never an improvement
    return ev


OBJECTIVES = {
    "main": _Objective("dx", "max", _make_main),
    "interp": _Objective("dx", "max", _make_interp),
    "eq1-plus": _Objective("dx", "max", _make_eq1(+1)),
    "eq1-minus": _Objective("dx", "max", _make_eq1(-1)),
    "eq2": _Objective("pair-pos", "max", _make_eq2),
    "mazur": _Objective("pair-gen", "max", _make_mazur("mazur")),
    "abs-power": _Objective("pair-gen", "max", _make_mazur("abs-power")),
    "tmap": _Objective("dx", "max", _make_tmap),
    "triangular-probe": _Objective("dx", "max", _make_triangular),
    "rx-probe": _Objective("rx", "max", _make_rx),
    "convexity-defect-min": _Objective("family", "min", _make_defect_min),
}


def _initial_state(kind, spec, rng, diagonal=False):
    dim = spec.dim
    if kind in ("dx", "rx", "family"):
        st = {"logspec": _draw_log_spectrum(rng, dim, spec.spectrum_law),
              "unitary": np.eye(dim, dtype=complex) if diagonal
              else _haar_unitary(rng, dim),
              "x": _draw_x(rng, dim, spec.x_law)}
        if diagonal:
            st["x"] = np.diag(np.diagonal(st["x"])).astype(complex)
        return st
    if kind == "pair-pos":
        st = {"logspec": _draw_log_spectrum(rng, dim, spec.spectrum_law),
              "logspec2": _draw_log_spectrum(rng, dim, spec.spectrum_law)}
        if diagonal:
            st["unitary"] = st["unitary2"] = np.eye(dim, dtype=complex)
        else:
            st["unitary"] = _haar_unitary(rng, dim)
            st["unitary2"] = _haar_unitary(rng, dim)
        return st
    if kind == "pair-gen":
        return {"x": _draw_x(rng, dim, spec.x_law),
                "y": _draw_x(rng, dim, spec.x_law)}
    raise ValidationError("unknown objective kind %r" % (kind,))


def _matrix_bump(st, key, rng, step, x_law, diagonal):
    scale = max(np.abs(st[key]).max(), 1e-6)
    bump = step * scale * _complex_gaussian(rng, st[key].shape)
    if x_law == "hermitian-gaussian":
        bump = 0.5 * (bump + bump.conj().T)
    if diagonal:
        bump = np.diag(np.diagonal(bump))
    return bump


def _perturb(kind, st, rng, step, x_law, diagonal=False):
    """One random proposal: perturb a random block of the state, or all of it.

    Blocks are the log-spectra (multiplicative moves) and the matrix parts
    (additive moves); pairs additionally get a translation move that shifts
    x and y by the same bump, which walks along the near-coincident ridge
    without collapsing the difference.
    """
    spectra = [k for k in ("logspec", "logspec2") if k in st]
    mats = [k for k in ("x", "y")
            if k in st and isinstance(st.get(k), np.ndarray) and st[k].ndim == 2]
    modes = ["all"] + (["spectra"] if spectra else []) + mats
    if len(mats) == 2:
        modes.append("translate")
    mode = modes[rng.integers(len(modes))]

    out = dict(st)
    if mode == "translate":
        bump = _matrix_bump(st, "x", rng, step, x_law, diagonal)
        out["x"] = st["x"] + bump
        out["y"] = st["y"] + bump
        return out
    if mode in ("all", "spectra"):
        for key in spectra:
            out[key] = st[key] + step * rng.standard_normal(st[key].shape)
    for key in mats:
        if mode in ("all", key):
            out[key] = st[key] + _matrix_bump(st, key, rng, step, x_law, diagonal)
    return out


def _serialize_state(st):
    out = {}
    for key, val in st.items():
        arr = np.asarray(val)
        if np.iscomplexobj(arr):
            out[key] = {"re": arr.real.tolist(), "im": arr.imag.tolist()}
        else:
            out[key] = arr.tolist()
    return out


def deserialize_state(blob):
    out = {}
    for key, val in blob.items():
        if isinstance(val, dict) and "re" in val:
            out[key] = np.asarray(val["re"], dtype=float) \
                + 1j * np.asarray(val["im"], dtype=float)
        else:
            out[key] = np.asarray(val, dtype=float)
    return out


def _step_at(schedule, i, budget):
    lo, hi = schedule[1], schedule[0]
    if budget <= 1:
        return hi
    return hi * (lo / hi) ** (i / (budget - 1))


def _run_start(args):
    (objective_id, params, spec, start_index, budget, schedule, diagonal) = args
    obj = OBJECTIVES[objective_id]
    evaluate = obj.make_eval(params)
    rng = _rng_for(spec.seed, start_index)
    st = _initial_state(obj.kind, spec, rng, diagonal)
    sign = 1.0 if obj.direction == "max" else -1.0
    flagged = 0
    flagged_states = []

    val = evaluate(st)
    if math.isinf(val) and obj.direction == "max":
        flagged += 1
        flagged_states.append(_serialize_state(st))
        val = -math.inf
    best, best_st = val, st
    events = [(0, best)]

    # pattern moves: while a random perturbation keeps improving, repeat the
    # same displacement instead of drawing a fresh one -- this follows the
    # narrow ridges these ratio landscapes develop near their suprema
    delta = None
    for i in range(budget):
        if delta is not None:
            cand = {k: best_st[k] + delta[k] if k in delta else best_st[k]
                    for k in best_st}
        else:
            step = _step_at(schedule, i, budget)
            cand = _perturb(obj.kind, best_st, rng, step, spec.x_law, diagonal)
        try:
            v = evaluate(cand)
        except ValidationError:
            delta = None
            continue
        if math.isinf(v) and obj.direction == "max":
            flagged += 1
            if len(flagged_states) < 3:
                flagged_states.append(_serialize_state(cand))
            delta = None
            continue
        if sign * v > sign * best:
            delta = {k: cand[k] - best_st[k] for k in cand
                     if isinstance(cand[k], np.ndarray)
                     and not np.array_equal(cand[k], best_st[k])}
            best, best_st = v, cand
            events.append((i + 1, best))
        else:
            delta = None

    return best, _serialize_state(best_st), events, flagged, flagged_states


def maximize(objective_id, exponents, spec, budget, schedule=None, starts=16,
             jobs=1, diagonal=False):
    """Multi-start hill climbing of a registered ratio objective.

    Returns a RatioReport; 'convexity-defect-min' minimizes instead.
    Identical arguments yield an identical report regardless of jobs.
    """
    if objective_id not in OBJECTIVES:
        raise ValidationError("unknown objective %r (known: %s)"
                              % (objective_id, ", ".join(sorted(OBJECTIVES))))
    if starts < 1:
        raise ValidationError("needs at least one start")
    obj = OBJECTIVES[objective_id]
    schedule = tuple(schedule) if schedule else DEFAULT_SCHEDULE
    tasks = [(objective_id, dict(exponents), spec, idx, budget, schedule, diagonal)
             for idx in range(starts)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_start, tasks))
    else:
        results = [_run_start(t) for t in tasks]

    sign = 1.0 if obj.direction == "max" else -1.0
    best_idx = 0
    for idx, res in enumerate(results):
        if sign * res[0] > sign * results[best_idx][0]:
            best_idx = idx

    # per-iteration global best across starts, reduced to change points
    per_start = []
    for res in results:
        vals = np.full(budget + 1, -sign * math.inf)
        for it, v in res[2]:
            vals[it:] = v
        per_start.append(vals)
    combined = per_start[0]
    for vals in per_start[1:]:
        combined = np.maximum(combined, vals) if sign > 0 else np.minimum(combined, vals)
    trace = []
    for it, v in enumerate(combined):
        if not trace or v != trace[-1][1]:
            trace.append([int(it), float(v)])

    flagged_total = sum(res[3] for res in results)
    flagged_witnesses = []
    for res in results:
        for fs in res[4]:
            if len(flagged_witnesses) < 5:
                flagged_witnesses.append(fs)

    return RatioReport(
        objective_id=objective_id,
        exponents=dict(exponents),
        best_ratio=float(results[best_idx][0]),
        witness=results[best_idx][1],
        trace=trace,
        seed=spec.seed,
        flagged_instances=flagged_total,
        flagged_witnesses=flagged_witnesses,
        starts=starts,
        budget=budget,
        spec={"dim": spec.dim, "spectrum_law": spec.spectrum_law,
              "x_law": spec.x_law, "diagonal": diagonal},
        direction=obj.direction,
    )


def replay_witness(report):
    """Re-evaluate the reported best witness; must reproduce best_ratio."""
    obj = OBJECTIVES[report.objective_id]
    evaluate = obj.make_eval(report.exponents)
    return evaluate(deserialize_state(report.witness))


def review_flagged(report, jitter=1e-6, trials=3):
    """Replay each flagged near-kernel witness under small jitter.

    A flagged instance is benign when jittered copies yield finite,
    moderate ratios: the sentinel then reflects numerical degeneracy of
    the denominator.  A witness whose jittered ratios stay enormous would
    be a counterexample candidate.  Returns a list of verdict dicts.
    """
    obj = OBJECTIVES[report.objective_id]
    evaluate = obj.make_eval(report.exponents)
    scale = max(abs(report.best_ratio), 1.0)
    verdicts = []
    for widx, blob in enumerate(report.flagged_witnesses):
        st = deserialize_state(blob)
        rng = np.random.default_rng(np.random.SeedSequence(
            entropy=report.seed, spawn_key=(0xF1A6, widx)))
        ratios = []
        for _ in range(trials):
            cand = _perturb(obj.kind, st, rng, jitter,
                            report.spec.get("x_law", "gaussian-complex"),
                            report.spec.get("diagonal", False))
            try:
                v = evaluate(cand)
            except ValidationError:
                continue
            if math.isfinite(v):
                ratios.append(v)
        benign = bool(ratios) and max(ratios) <= 1e3 * scale
        verdicts.append({"witness_index": widx, "benign": benign,
                         "jittered_ratios": ratios})
    return verdicts
