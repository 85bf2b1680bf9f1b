"""
Monte Carlo risks of the estimation procedures, noise-level sweeps and the oracle-ratio study.

Replicate k of every run uses the Philox stream (master_seed, k), so the same replicate index sees the same
standard Gaussian draws at every noise level and for every procedure.
"""

import math
import numpy as np
from scipy.stats import linregress

from core.field.noise_field import GridSpec, simulate, DEFAULT_N_PER_AXIS
from core.metrics.accumulator import WelfordAccumulator
from core.oracle.bias import BiasProfile
from core.oracle.oracle import oracle_bandwidth, oracle_risk_bound
from core.risk.calibration import calibrate_threshold
from core.risk.constants import c_r1, c_r2, adaptive_risk_bound, global_oracle_bound
from core.risk.procedures import AdaptiveProcedure, OracleProcedure
from core.risk.rates import Regime, rate_fit, psi_rate, phi_rate, MIN_FIT_POINTS
from core.selection.selector import SelectorConfig, check_epsilon_guard, DEFAULT_N_DIRECTIONS
from core.utils.csv_utils import save_csv
from core.utils.errors import GuardError
from core.utils.logutils import get_logger
from core.utils.mathutils import midpoint_nodes
from core.utils.poolutils import ordered_map


# Logging
logger = get_logger(__name__)

# Defaults
DEFAULT_EPSILONS = tuple(2.0 ** -k for k in range(4, 10))
DEFAULT_REPLICATES = 200
ACCEPTANCE_REPLICATES = 50
ORIGIN = (0.0, 0.0)
RATIO_SLOPE_TOL = 0.15
NORM_TOL = 1e-12

SWEEP_COLUMNS = ["epsilon", "x1", "x2", "procedure", "risk", "stderr", "mean_h", "alignment", "oracle_h_star",
                 "oracle_bound", "ratio", "adaptive_risk_bound", "adaptive_bound_holds", "psi_rate"]
FIT_COLUMNS = ["procedure", "x1", "x2", "slope", "intercept", "residual", "theoretical_exponent", "slope_stderr",
               "n_points", "regime"]
GLOBAL_COLUMNS = ["epsilon", "risk", "stderr", "lr_of_pointwise", "sup_pointwise", "jensen_holds", "sup_holds",
                  "oracle_bound", "bound_holds", "phi_rate"]


class RiskConfig(object):
    """
    Parameters of a risk run.
    """

    def __init__(self, kernel, r=2.0, points=(ORIGIN,), replicates=DEFAULT_REPLICATES, epsilons=DEFAULT_EPSILONS,
                 master_seed=0, threshold_scale=None, n_grid=DEFAULT_N_PER_AXIS, n_directions=DEFAULT_N_DIRECTIONS,
                 calibration_replicates=None,
                 jobs=1):
        """
        :param kernel: (ProductKernel) the kernel.
        :param r: (float) the risk order, >= 1.
        :param points: (sequence) the points x of the pointwise runs.
        :param replicates: (int) Monte Carlo replicates per point.
        :param epsilons: (sequence) the noise levels, in (0, exp(-1)].
        :param master_seed: (int) the master seed.
        :param threshold_scale: (float) the selector scale; None calibrates it at the smallest noise level.
        :param n_grid: (int) grid cells per axis.
        :param n_directions: (int) the direction grid of the selector.
        :param calibration_replicates: (int) replicates of the calibration; the run replicates if None.
        :param jobs: (int) workers over replicates.
        """
        if r < 1:
            raise GuardError("r >= 1", "invalid risk order: {}".format(r))
        if int(replicates) < 1:
            raise GuardError("replicates >= 1", "invalid replicate count: {}".format(replicates))
        if len(epsilons) == 0 or not all(0.0 < e <= math.exp(-1.0) for e in epsilons):
            raise GuardError("0 < epsilon <= exp(-1)", "noise levels out of range: {}".format(list(epsilons)))
        if int(replicates) < ACCEPTANCE_REPLICATES:
            logger.warning("{} replicates: below the {} of an acceptance run".format(replicates, ACCEPTANCE_REPLICATES))
        self.kernel = kernel
        self.r = float(r)
        self.points = [tuple(float(c) for c in x) for x in points]
        self.replicates = int(replicates)
        self.epsilons = sorted((float(e) for e in epsilons), reverse=True)
        self.master_seed = int(master_seed)
        self.threshold_scale = threshold_scale
        self.n_grid = int(n_grid)
        self.n_directions = int(n_directions) if n_directions else DEFAULT_N_DIRECTIONS
        self.calibration_replicates = int(calibration_replicates or replicates)
        self.jobs = jobs

    def grid(self):
        return GridSpec(n_per_axis=self.n_grid)

    def min_bandwidth(self):
        """
        :return: (float) the smallest grid-resolved bandwidth.
        """
        return self.grid().min_bandwidth()

    def selector_config(self, epsilon, threshold_scale):
        return SelectorConfig(self.kernel, epsilon, r=self.r, n_directions=self.n_directions,
                              threshold_scale=threshold_scale, min_bandwidth=self.min_bandwidth())

    def __str__(self):
        return "RiskConfig(r={}, points={}, replicates={}, epsilons={}, seed={}, scale={}, n_grid={}, n_directions={})".format(
            self.r, self.points, self.replicates, self.epsilons, self.master_seed, self.threshold_scale, self.n_grid,
            self.n_directions)


class RiskEstimate(object):
    """
    A Monte Carlo risk with its standard error and the mean choices of the procedure.
    """

    def __init__(self, value, stderr, moment, replicates, info):
        self.value = float(value)
        self.stderr = float(stderr)
        self.moment = float(moment)
        self.replicates = replicates
        self.info = info

    def __str__(self):
        return "RiskEstimate(value={}, stderr={}, replicates={})".format(self.value, self.stderr, self.replicates)


class GlobalRisk(object):
    """
    The global risk E||F_hat - F||_r over a point grid, with the pointwise risks it is compared to.
    """

    def __init__(self, value, stderr, pointwise, weight, r):
        self.value = float(value)
        self.stderr = float(stderr)
        self.pointwise = np.asarray(pointwise, dtype=float)
        self.weight = weight
        self.r = float(r)
        self.lr_of_pointwise = float(np.sum(weight * self.pointwise ** self.r)) ** (1.0 / self.r)
        # the grid carries total weight weight * len(points)
        self.sup_pointwise = float(np.max(self.pointwise)) * (weight * len(self.pointwise)) ** (1.0 / self.r)

    def jensen_holds(self):
        """
        :return: (bool) global risk <= L_r norm of the pointwise risks.
        """
        return self.value <= self.lr_of_pointwise * (1.0 + NORM_TOL)

    def sup_holds(self):
        """
        :return: (bool) global risk <= sup of the pointwise risks on the grid.
        """
        return self.value <= self.sup_pointwise * (1.0 + NORM_TOL)

    def __str__(self):
        return "GlobalRisk(value={}, stderr={}, lr_of_pointwise={}, sup_pointwise={})".format(
            self.value, self.stderr, self.lr_of_pointwise, self.sup_pointwise)


def true_value(F, x):
    """
    :return: (float) F(x); zero for pure noise.
    """
    if F is None:
        return 0.0
    if hasattr(F, "value_at"):
        return F.value_at(x)
    return float(F(x[0], x[1]))


def _observe(F, epsilon, grid, seed, k):
    return simulate(F, epsilon, grid, seed, replicate=k, deterministic=(epsilon == 0.0))


def _summarize(infos):
    summary = {}
    for key in ("h", "alignment"):
        values = [info[key] for info in infos if key in info]
        if values:
            summary["mean_" + key] = float(np.mean(values))
    summary["fallbacks"] = sum(1 for info in infos if info.get("fallback"))
    summary["floored"] = sum(1 for info in infos if info.get("floored"))
    return summary


def pointwise_risk(procedure, F, epsilon, x, r, replicates, seed, grid=None, jobs=1):
    """
    (E|F_hat(x) - F(x)|^r)^(1/r) by Monte Carlo.
    The standard error follows from that of the mean moment by the delta method.
    :param procedure: (Procedure) the procedure.
    :param F: (callable|None) the signal; None is pure noise.
    :param epsilon: (float) the noise level; 0 runs the noiseless observation once.
    :param x: (tuple) the point.
    :param r: (float) the risk order.
    :param replicates: (int) the number of replicates.
    :param seed: (int) the master seed.
    :param grid: (GridSpec) the grid; the default grid if None.
    :param jobs: (int) workers over replicates.
    :return: (RiskEstimate) the risk.
    """
    grid = grid or GridSpec()
    truth = true_value(F, x)
    replicates = 1 if epsilon == 0.0 else int(replicates)

    def replicate(k):
        value, info = procedure.run(_observe(F, epsilon, grid, seed, k), x)
        return abs(value - truth) ** r, info

    results = ordered_map(replicate, range(replicates), jobs)
    accumulator = WelfordAccumulator()
    accumulator.add_all(moment for moment, _ in results)
    moment = accumulator.mean()
    value = moment ** (1.0 / r)
    stderr = (1.0 / r) * moment ** (1.0 / r - 1.0) * accumulator.stderr() if moment > 0.0 else 0.0
    return RiskEstimate(value, stderr, moment, replicates, _summarize([info for _, info in results]))


def x_grid(n):
    """
    The midpoint grid of n x n points on [-1/2, 1/2]^2.
    :return: (list(tuple), float) the points and the common cell weight.
    """
    nodes, step = midpoint_nodes(-0.5, 0.5, n)
    return [(float(a), float(b)) for a in nodes for b in nodes], step * step


def global_risk(procedure, F, epsilon, r, xs, replicates, seed, weight=None, grid=None, jobs=1):
    """
    E||F_hat - F||_r, the L_r norm taken by quadrature over the points.
    :param xs: (list(tuple)) the points.
    :param weight: (float) the quadrature weight of every point; 1/len(xs) if None.
    :return: (GlobalRisk) the risk with the pointwise risks at every point.
    """
    grid = grid or GridSpec()
    weight = 1.0 / len(xs) if weight is None else weight
    truths = np.array([true_value(F, x) for x in xs])
    replicates = 1 if epsilon == 0.0 else int(replicates)

    def replicate(k):
        obs = _observe(F, epsilon, grid, seed, k)
        return np.abs(np.array([procedure(obs, x) for x in xs]) - truths) ** r

    moments = np.array(ordered_map(replicate, range(replicates), jobs))
    norms = WelfordAccumulator()
    norms.add_all((weight * np.sum(moments, axis=1)) ** (1.0 / r))
    return GlobalRisk(norms.mean(), norms.stderr(), np.mean(moments, axis=0) ** (1.0 / r), weight, r)


class SweepResult(object):
    """
    The rows of a pointwise sweep, the rate fits and the calibration the sweep ran with.
    """

    def __init__(self, config, signal, rows, fits, threshold_scale, calibration=None):
        self.config = config
        self.signal = signal
        self.rows = rows
        self.fits = fits
        self.threshold_scale = threshold_scale
        self.calibration = calibration

    def select(self, procedure, x=None):
        x = tuple(x) if x is not None else self.config.points[0]
        return [row for row in self.rows if row["procedure"] == procedure and (row["x1"], row["x2"]) == x]

    def fit(self, procedure, x=None):
        x = tuple(x) if x is not None else self.config.points[0]
        for name, point, fit in self.fits:
            if name == procedure and point == x:
                return fit
        return None

    def adaptive_bound_holds(self):
        return all(row["adaptive_bound_holds"] for row in self.rows if row["procedure"] == AdaptiveProcedure.name)

    def comments(self):
        lines = ["threshold_scale = {}".format(self.threshold_scale)]
        if self.calibration is not None:
            lines += self.calibration.header_lines()
        return lines

    def save_csv(self, filename, comments=None):
        data = [[row[name] for name in SWEEP_COLUMNS] for row in self.rows]
        save_csv(filename, SWEEP_COLUMNS, data, empty=True, comments=(comments or []) + self.comments())

    def save_summary_csv(self, filename, comments=None):
        data = []
        for name, x, fit in self.fits:
            values = fit.as_dict()
            data.append([name, x[0], x[1]] + [values[column] for column in FIT_COLUMNS[3:]])
        save_csv(filename, FIT_COLUMNS, data, empty=True, comments=(comments or []) + self.comments())


def _resolve_scale(config, threshold_scale=None):
    scale = threshold_scale if threshold_scale is not None else config.threshold_scale
    if scale is not None:
        return float(scale), None
    calibration = calibrate_threshold(config.kernel, min(config.epsilons), config.grid(),
                                      replicates=config.calibration_replicates, seed=config.master_seed,
                                      n_directions=config.n_directions, r=config.r,
                                      min_bandwidth=config.min_bandwidth(), jobs=config.jobs)
    return calibration.scale, calibration


def _fits(rows, names, points, beta):
    fits = []
    for name in names:
        for x in points:
            selected = [row for row in rows if row["procedure"] == name and (row["x1"], row["x2"]) == x]
            if len(selected) < MIN_FIT_POINTS or beta is None:
                logger.warning("No rate fit for {} at {}: {} noise levels, beta={}".format(name, x, len(selected), beta))
                continue
            if any(row["risk"] <= 0 for row in selected):
                logger.warning("No rate fit for {} at {}: a risk vanished".format(name, x))
                continue
            fits.append((name, x, rate_fit([row["epsilon"] for row in selected], [row["risk"] for row in selected], beta)))
    return fits


def check_guards(signal, config, M=None):
    """
    Check every noise level of the run against the noise guard. Only a configured M enforces it;
    the bound computed from the signal is checked with a warning.
    :return: (float) the bound M entering the constants.
    """
    enforce = M is not None
    M = M if enforce else signal.bound_M
    for eps in config.epsilons:
        check_epsilon_guard(eps, M, config.kernel, enforce)
    return M


def risk_sweep(signal, config, procedures=(AdaptiveProcedure.name, OracleProcedure.name), M=None, threshold_scale=None):
    """
    Pointwise risks of every procedure at every point and noise level, with rate fits against psi_eps.
    :param signal: (SingleIndexSignal) the signal.
    :param config: (RiskConfig) the run configuration.
    :param procedures: (sequence) procedure names among adaptive and oracle.
    :param M: (float) the configured bound of the link; if None, the signal bound enters C_(r,2)
        and the guard only warns.
    :param threshold_scale: (float) overrides the configured scale.
    :return: (SweepResult) the sweep.
    """
    M = check_guards(signal, config, M)
    scale, calibration = _resolve_scale(config, threshold_scale)
    grid = config.grid()
    profile = BiasProfile(config.kernel.factor, signal.link)
    beta = signal.params.get("beta")
    rows = []
    for eps in config.epsilons:
        built = {}
        if AdaptiveProcedure.name in procedures:
            built[AdaptiveProcedure.name] = AdaptiveProcedure(config.selector_config(eps, scale), signal.theta0)
        if OracleProcedure.name in procedures:
            built[OracleProcedure.name] = OracleProcedure(config.kernel, signal, eps, config.min_bandwidth(), profile)
        for x in config.points:
            h_star = oracle_bandwidth(profile, eps, signal.index(x))
            bound = oracle_risk_bound(h_star, eps, config.r, config.kernel)
            certified = adaptive_risk_bound(config.kernel, eps, config.r, M, h_star)
            for name in procedures:
                risk = pointwise_risk(built[name], signal, eps, x, config.r, config.replicates, config.master_seed,
                                      grid, config.jobs)
                rows.append({"epsilon": eps, "x1": x[0], "x2": x[1], "procedure": name, "risk": risk.value,
                             "stderr": risk.stderr, "mean_h": risk.info.get("mean_h", float("nan")),
                             "alignment": risk.info.get("mean_alignment", float("nan")), "oracle_h_star": h_star,
                             "oracle_bound": bound, "ratio": risk.value / bound, "adaptive_risk_bound": certified,
                             "adaptive_bound_holds": risk.value <= certified,
                             "psi_rate": psi_rate(beta, signal.params.get("L", 1.0), eps) if beta else float("nan")})
                logger.info("epsilon={} x={} {}: {}".format(eps, x, name, risk))
    return SweepResult(config, signal, rows, _fits(rows, procedures, config.points, beta), scale, calibration)


class OracleRatioStudy(object):
    """
    Adaptive risk over the oracle bound at every noise level, with the constants of the oracle inequality.
    """

    def __init__(self, rows, slope, c1, c2, sweep):
        self.rows = rows
        self.slope = slope
        self.c_r1 = c1
        self.c_r2 = c2
        self.sweep = sweep

    def bounded(self, tol=RATIO_SLOPE_TOL):
        """
        :return: (bool) the slope of log ratio against log eps lies within +-tol of zero.
        """
        return self.slope is not None and abs(self.slope) <= tol

    def adaptive_bound_holds(self):
        return all(row["adaptive_bound_holds"] for row in self.rows)

    def save_csv(self, filename, comments=None):
        columns = ["epsilon", "adaptive_risk", "oracle_bound", "ratio", "adaptive_risk_bound", "adaptive_bound_holds"]
        data = [[row[name] for name in columns] for row in self.rows]
        lines = (comments or []) + ["log_ratio_slope = {}".format(self.slope), "c_r1 = {}".format(self.c_r1),
                                    "c_r2 = {}".format(self.c_r2)]
        save_csv(filename, columns, data, empty=True, comments=lines + self.sweep.comments())


def oracle_ratio_study(signal, config, M=None, sweep=None, threshold_scale=None):
    """
    For every noise level: the adaptive risk at the first point, the oracle bound, their ratio and the
    oracle inequality with the computed constants.
    :param sweep: (SweepResult) a sweep holding the adaptive rows; run here if None.
    :return: (OracleRatioStudy) the study.
    """
    sweep = sweep or risk_sweep(signal, config, (AdaptiveProcedure.name,), M, threshold_scale)
    M = signal.bound_M if M is None else M
    rows = []
    for row in sweep.select(AdaptiveProcedure.name):
        rows.append({"epsilon": row["epsilon"], "adaptive_risk": row["risk"], "oracle_bound": row["oracle_bound"],
                     "ratio": row["ratio"], "adaptive_risk_bound": row["adaptive_risk_bound"],
                     "adaptive_bound_holds": row["adaptive_bound_holds"]})
    slope = None
    usable = [row for row in rows if row["ratio"] > 0]
    if len(usable) >= 3:
        slope = float(linregress(np.log([row["epsilon"] for row in usable]),
                                 np.log([row["ratio"] for row in usable])).slope)
    return OracleRatioStudy(rows, slope, c_r1(config.kernel, config.r), c_r2(config.kernel, config.r, M), sweep)


class GlobalSweepResult(object):
    """
    Global risks of the adaptive rule across noise levels, with the rate fit against phi_eps.
    """

    def __init__(self, rows, fit, p, threshold_scale, calibration=None):
        self.rows = rows
        self.fit = fit
        self.p = p
        self.threshold_scale = threshold_scale
        self.calibration = calibration

    def norms_hold(self):
        return all(row["jensen_holds"] and row["sup_holds"] for row in self.rows)

    def bound_holds(self):
        return all(row["bound_holds"] for row in self.rows)

    def save_csv(self, filename, comments=None):
        data = [[row[name] for name in GLOBAL_COLUMNS] for row in self.rows]
        lines = (comments or []) + ["threshold_scale = {}".format(self.threshold_scale)]
        if self.calibration is not None:
            lines += self.calibration.header_lines()
        save_csv(filename, GLOBAL_COLUMNS, data, empty=True, comments=lines)


def global_sweep(signal, config, p, n_points=8, M=None, threshold_scale=None):
    """
    Global risk of the adaptive rule over an n x n midpoint grid of [-1/2, 1/2]^2 at every noise level.
    :param signal: (SingleIndexSignal) the signal, whose params carry beta.
    :param config: (RiskConfig) the configuration; its points are ignored.
    :param p: (float) the integrability index of the class.
    :param n_points: (int) the point grid per axis.
    :return: (GlobalSweepResult) the sweep.
    """
    M = check_guards(signal, config, M)
    scale, calibration = _resolve_scale(config, threshold_scale)
    xs, weight = x_grid(n_points)
    beta = signal.params.get("beta")
    L = signal.params.get("L", 1.0)
    profile = BiasProfile(config.kernel.factor, signal.link)
    rows = []
    for eps in config.epsilons:
        procedure = AdaptiveProcedure(config.selector_config(eps, scale))
        risk = global_risk(procedure, signal, eps, config.r, xs, config.replicates, config.master_seed, weight,
                           config.grid(), config.jobs)
        bound = global_oracle_bound(signal.link, config.kernel, eps, config.r, M, profile=profile)
        rows.append({"epsilon": eps, "risk": risk.value, "stderr": risk.stderr, "lr_of_pointwise": risk.lr_of_pointwise,
                     "sup_pointwise": risk.sup_pointwise, "jensen_holds": risk.jensen_holds(),
                     "sup_holds": risk.sup_holds(), "oracle_bound": bound, "bound_holds": risk.value <= bound,
                     "phi_rate": phi_rate(beta, L, p, config.r, eps) if beta else float("nan")})
        logger.info("epsilon={} global: {}".format(eps, risk))
    fit = None
    if beta is not None and len(rows) >= MIN_FIT_POINTS:
        fit = rate_fit([row["epsilon"] for row in rows], [row["risk"] for row in rows], beta, p, config.r)
        if fit.regime is Regime.BOUNDARY:
            logger.info("Boundary regime (2 beta + 1) p = r: the fit is reported only")
    return GlobalSweepResult(rows, fit, p, scale, calibration)
