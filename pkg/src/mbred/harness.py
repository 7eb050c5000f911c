"""Seeded verification suites and JSON reports.

Every case ``k`` of a suite draws its randomness from
``child_rng(seed, k)``, and suite results are reduced with ``max``/``sum``
only, so report numbers depend on the configuration alone.
"""

from __future__ import annotations

import json
import time
from collections.abc import Callable, Iterable
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from ._config import Tolerances, config_context
from .extensions import (
    example1,
    example2,
    example3,
    example3_pure_kets,
    extract_omega_tilde,
    index_map,
    pure_fiber_weight,
    reduce_extension,
    verify_representation,
)
from .fuzzy import (
    Povm,
    classical_distribution,
    kernel_from_povm,
    quantum_distribution,
    random_povm,
    sharp_effect_residual,
    simulate_outcomes,
)
from .linalg import (
    eig_hermitian,
    operator_norm,
    random_density,
    random_effect,
    random_haar_unitary,
    random_isometry,
    trace_norm,
)
from .mbmap import (
    adjoint_effect,
    alternative_ensemble,
    eigen_ensemble,
    purity,
    reduce,
    support_concentration,
    to_pure_point,
)
from .measures import DiscreteMeasure, dirac, expectation, mix, tv_distance
from .projective import (
    PurePoint,
    basis_point,
    dist_opnorm,
    in_weak_neighborhood,
    sample_haar_kets,
    transition_probability,
)
from .rng import child_rng

NEIGHBORHOOD_EPS = (0.1, 0.5, 1.0)
SIM_SIGMAS = 4.0
SHARP_EFFECT_SLACK = 0.9

# check name -> tolerance; overridable with --tol NAME=VALUE
CHECK_TOLERANCES: dict[str, float] = {
    "metrics.opnorm_formula": 1e-10,
    "metrics.trace_factor": 1e-10,
    "metrics.contraction": 1e-12,
    "metrics.triangle": 1e-12,
    "metrics.purity_limit_identity": 1e-12,
    "metrics.overlap_bound": 1e-12,
    "topology.disagreements": 0.0,
    "mb.roundtrip": 1e-10,
    "mb.duality": 1e-12,
    "mb.affinity": 1e-12,
    "contextuality.tv_shortfall": 0.0,
    "contextuality.reduction_gap": 1e-12,
    "dirac.concentration_shortfall": 1e-8,
    "dirac.two_point_purity_excess": 0.0,
    "povm.reproduction": 1e-10,
    "povm.normalization": 1e-12,
    "simulate.max_sigma": SIM_SIGMAS,
    "sharp.residual_shortfall": 0.0,
    "extension.representation": 1e-10,
    "extension.fiber": 1e-8,
    "extension.omega_tilde": 0.0,
}

EXPERIMENTS = (
    "verify-metrics",
    "topology",
    "mb-roundtrip",
    "contextuality",
    "dirac-fiber",
    "povm-kernel",
    "simulate",
    "sharp-effect",
    "extension",
    "all",
)

DEFAULT_DIMS = {
    "verify-metrics": [2, 3, 4, 8],
    "topology": [2, 4],
    "mb-roundtrip": [2, 3, 4, 5, 6, 7, 8],
    "contextuality": [2, 3, 4, 5, 6, 7, 8],
    "dirac-fiber": [2, 3, 4],
    "povm-kernel": [2, 3, 4],
    "simulate": [2],
    "sharp-effect": [2],
    "extension": [2, 3, 4],
}

DEFAULT_SAMPLES = {
    "verify-metrics": 1000,
    "topology": 10_000,
    "mb-roundtrip": 500,
    "contextuality": 100,
    "dirac-fiber": 200,
    "povm-kernel": 200,
    "simulate": 100_000,
    "sharp-effect": 200,
    "extension": 100,
}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    experiment: str
    dims: list[int] | None = None
    samples: int | None = None
    seed: int = 0
    tolerances: dict[str, float] = field(default_factory=dict)
    out: str | None = None
    example: int | None = None

    def validate(self) -> ExperimentConfig:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if self.dims is not None:
            if not self.dims or any(not isinstance(d, int) or isinstance(d, bool) or d < 1 for d in self.dims):
                raise ConfigError(f"dims must be positive integers, got {self.dims!r}")
        if self.samples is not None and (not isinstance(self.samples, int) or self.samples < 0):
            raise ConfigError(f"samples must be a non-negative integer, got {self.samples!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        known = set(Tolerances.names()) | set(CHECK_TOLERANCES)
        unknown = set(self.tolerances) - known
        if unknown:
            raise ConfigError(f"unknown tolerance name(s): {sorted(unknown)}")
        if self.example is not None and self.example not in (1, 2, 3):
            raise ConfigError(f"example must be 1, 2 or 3, got {self.example!r}")
        return self

    def dims_for(self, experiment: str) -> list[int]:
        return list(self.dims) if self.dims is not None else list(DEFAULT_DIMS[experiment])

    def samples_for(self, experiment: str) -> int:
        return self.samples if self.samples is not None else DEFAULT_SAMPLES[experiment]


@dataclass
class CheckRecord:
    name: str
    max_error: float
    tolerance: float
    n_cases: int
    passed: bool = field(init=False)

    def __post_init__(self):
        self.max_error = float(self.max_error)
        self.passed = bool(self.max_error <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "n_cases": self.n_cases,
        }


@dataclass
class Report:
    experiment: str
    config: dict
    checks: list[CheckRecord]
    wall_time: float
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
            "pass": self.passed,
            "wall_time": self.wall_time,
            "version": self.version,
        }

    def to_json(self, include_wall_time: bool = True) -> str:
        d = self.to_dict()
        if not include_wall_time:
            del d["wall_time"]
        return json.dumps(d, indent=2, sort_keys=True)


class _Acc:
    """Running max over cases for one check."""

    def __init__(self):
        self.err = 0.0
        self.n = 0

    def add(self, err: float, n: int = 1):
        self.err = max(self.err, float(err))
        self.n += n


def _records(tols: dict, accs: dict[str, _Acc]) -> list[CheckRecord]:
    return [CheckRecord(name, acc.err, tols[name], acc.n) for name, acc in accs.items()]


def _cases(seed: int, dims: list[int], samples: int, stream: int) -> Iterable[tuple[int, np.random.Generator]]:
    """Yield ``(dim, rng)`` for ``samples`` cases per dim, each with its own child seed."""
    k = 0
    for dim in dims:
        for _ in range(samples):
            yield dim, child_rng(seed, (stream << 40) + k)
            k += 1


def _haar_point(dim: int, rng) -> PurePoint:
    return PurePoint(sample_haar_kets(dim, 1, rng)[0])


def suite_metrics(cfg: ExperimentConfig, tols: dict) -> list[CheckRecord]:
    names = [
        "metrics.opnorm_formula",
        "metrics.trace_factor",
        "metrics.contraction",
        "metrics.triangle",
        "metrics.purity_limit_identity",
        "metrics.overlap_bound",
    ]
    acc = {n: _Acc() for n in names}
    for dim, rng in _cases(cfg.seed, cfg.dims_for("verify-metrics"), cfg.samples_for("verify-metrics"), 1):
        kets = sample_haar_kets(dim, 3, rng)
        P, Q, S = (PurePoint(k) for k in kets)
        diff = P.projector - Q.projector
        op = operator_norm(diff)
        acc["metrics.opnorm_formula"].add(abs(dist_opnorm(P, Q) - op))
        acc["metrics.trace_factor"].add(abs(trace_norm(diff) - 2.0 * op))
        acc["metrics.contraction"].add(max(0.0, dist_opnorm(P, Q) - np.linalg.norm(kets[0] - kets[1])))
        acc["metrics.triangle"].add(max(0.0, dist_opnorm(P, S) - dist_opnorm(P, Q) - dist_opnorm(Q, S)))
        acc["metrics.purity_limit_identity"].add(
            abs(1.0 - transition_probability(P, Q) - dist_opnorm(P, Q) ** 2)
        )
        W = random_density(dim, rng)
        lam_max = eig_hermitian(W)[0][-1]
        acc["metrics.overlap_bound"].add(max(0.0, np.real(np.vdot(P.projector, W)) - lam_max))
    return _records(tols, acc)


def _perturbed_point(center: PurePoint, rng) -> PurePoint:
    scale = 10.0 ** rng.uniform(-3, 0.5)
    z = rng.standard_normal(center.dim) + 1j * rng.standard_normal(center.dim)
    return PurePoint(center.ket + scale * z / np.linalg.norm(z))


def suite_topology(cfg: ExperimentConfig, tols: dict) -> list[CheckRecord]:
    acc = {"topology.disagreements": _Acc()}
    samples = cfg.samples_for("topology")
    for d_index, dim in enumerate(cfg.dims_for("topology")):
        center = _haar_point(dim, child_rng(cfg.seed, (2 << 40) + d_index))
        disagreements = 0
        n = 0
        for _, rng in _cases(cfg.seed, [dim], samples, 3 + d_index):
            # half Haar points, half points concentrated near the center
            P_t = _haar_point(dim, rng) if rng.random() < 0.5 else _perturbed_point(center, rng)
            for eps in NEIGHBORHOOD_EPS:
                weak = in_weak_neighborhood(P_t, center, [center], eps**2)
                ball = dist_opnorm(P_t, center) < eps
                disagreements += weak != ball
                n += 1
        acc["topology.disagreements"].add(disagreements, n)
    return _records(tols, acc)


def random_measure(dim: int, rng, max_support: int = 32) -> DiscreteMeasure:
    n = int(rng.integers(1, max_support + 1))
    kets = sample_haar_kets(dim, n, rng)
    return DiscreteMeasure([PurePoint(k) for k in kets], rng.dirichlet(np.ones(n)))


def suite_mb(cfg: ExperimentConfig, tols: dict) -> list[CheckRecord]:
    acc = {n: _Acc() for n in ("mb.roundtrip", "mb.duality", "mb.affinity")}
    dims, samples = cfg.dims_for("mb-roundtrip"), cfg.samples_for("mb-roundtrip")
    # spread the sample budget over the dims instead of per dim
    for k in range(samples):
        rng = child_rng(cfg.seed, (10 << 40) + k)
        dim = dims[k % len(dims)]
        W = random_density(dim, rng)
        acc["mb.roundtrip"].add(trace_norm(reduce(eigen_ensemble(W)) - W))
        mu, nu = random_measure(dim, rng), random_measure(dim, rng)
        A = random_effect(dim, rng)
        f = adjoint_effect(A)
        acc["mb.duality"].add(abs(np.real(np.trace(reduce(mu) @ A)) - expectation(mu, f)))
        alpha = float(rng.uniform())
        lhs = reduce(mix(alpha, mu, nu))
        rhs = alpha * reduce(mu) + (1.0 - alpha) * reduce(nu)
        acc["mb.affinity"].add(np.max(np.abs(lhs - rhs)))
    return _records(tols, acc)


def _hadamard() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)


def contextuality_pair(W, M) -> tuple[float, float]:
    """``(tv distance, trace distance of reductions)`` for eigen vs mixed ensembles."""
    mu1, mu2 = eigen_ensemble(W), alternative_ensemble(W, M)
    return tv_distance(mu1, mu2), trace_norm(reduce(mu1) - reduce(mu2))


def suite_contextuality(cfg: ExperimentConfig, tols: dict) -> list[CheckRecord]:
    acc = {n: _Acc() for n in ("contextuality.tv_shortfall", "contextuality.reduction_gap")}
    tv, gap = contextuality_pair(np.eye(2) / 2, _hadamard())
    acc["contextuality.tv_shortfall"].add(max(0.0, 0.1 - tv))
    acc["contextuality.reduction_gap"].add(gap)
    dims = cfg.dims_for("contextuality")
    for k in range(cfg.samples_for("contextuality")):
        rng = child_rng(cfg.seed, (20 << 40) + k)
        dim = max(2, dims[k % len(dims)])
        W = random_density(dim, rng, rank=int(rng.integers(2, dim + 1)))
        r = len(eigen_ensemble(W))
        M = random_isometry(r + int(rng.integers(0, 3)), r, rng)
        tv, gap = contextuality_pair(W, M)
        acc["contextuality.tv_shortfall"].add(max(0.0, 0.1 - tv))
        acc["contextuality.reduction_gap"].add(gap)
    return _records(tols, acc)


def near_dirac_measure(dim: int, rng) -> DiscreteMeasure:
    """Cluster of points around one ray, spread ``10**U(-8, -1)``."""
    center = sample_haar_kets(dim, 1, rng)[0]
    n = int(rng.integers(1, 6))
    spread = 10.0 ** rng.uniform(-8, -1)
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    kets = center + spread * z / np.linalg.norm(z, axis=1, keepdims=True)
    phases = np.exp(2j * np.pi * rng.uniform(size=(n, 1)))
    return DiscreteMeasure([PurePoint(k) for k in kets * phases], rng.dirichlet(np.ones(n)))


def suite_dirac(cfg: ExperimentConfig, tols: dict) -> list[CheckRecord]:
    acc = {n: _Acc() for n in ("dirac.concentration_shortfall", "dirac.two_point_purity_excess")}
    dims = cfg.dims_for("dirac-fiber")
    for k in range(cfg.samples_for("dirac-fiber")):
        rng = child_rng(cfg.seed, (30 << 40) + k)
        dim = max(2, dims[k % len(dims)])
        mu = near_dirac_measure(dim, rng) if k % 2 == 0 else random_measure(dim, rng, 4)
        W = reduce(mu)
        if purity(W) >= 1.0 - 1e-10:
            acc["dirac.concentration_shortfall"].add(1.0 - support_concentration(mu, to_pure_point(W)))
        else:
            acc["dirac.concentration_shortfall"].add(0.0)
        P, Q = _haar_point(dim, rng), _haar_point(dim, rng)
        if transition_probability(P, Q) <= 0.9:
            two = DiscreteMeasure([P, Q], [0.5, 0.5])
            acc["dirac.two_point_purity_excess"].add(max(0.0, purity(reduce(two)) - 0.96))
        else:
            acc["dirac.two_point_purity_excess"].add(0.0)
    return _records(tols, acc)


def suite_povm(cfg: ExperimentConfig, tols: dict) -> list[CheckRecord]:
    acc = {n: _Acc() for n in ("povm.reproduction", "povm.normalization")}
    dims = cfg.dims_for("povm-kernel")
    for k in range(cfg.samples_for("povm-kernel")):
        rng = child_rng(cfg.seed, (40 << 40) + k)
        dim = dims[k % len(dims)]
        F = random_povm(dim, int(rng.integers(1, 6)), rng)
        K = kernel_from_povm(F)
        W = random_density(dim, rng)
        if k % 2 == 0:
            mu = eigen_ensemble(W)
        else:
            r = len(eigen_ensemble(W))
            mu = alternative_ensemble(W, random_isometry(r + int(rng.integers(0, 3)), r, rng))
        acc["povm.reproduction"].add(
            np.max(np.abs(quantum_distribution(F, W) - classical_distribution(K, mu)))
        )
        probes = [PurePoint(v) for v in sample_haar_kets(dim, 5, rng)]
        acc["povm.normalization"].add(np.max(np.abs(K.rows(probes).sum(axis=1) - 1.0)))
    return _records(tols, acc)


def suite_simulate(cfg: ExperimentConfig, tols: dict) -> list[CheckRecord]:
    """Two scenarios: ``delta_{P+}`` under the qubit Z measurement, and a random case."""
    acc = {"simulate.max_sigma": _Acc()}
    draws = cfg.samples_for("simulate")
    dim = cfg.dims_for("simulate")[0]
    rng = child_rng(cfg.seed, 50 << 40)
    plus = PurePoint(np.ones(dim))
    scenarios = [
        (Povm.from_basis(np.eye(dim)), dirac(plus)),
        (random_povm(dim, 3, rng), random_measure(dim, rng, 8)),
    ]
    for s, (F, mu) in enumerate(scenarios):
        K = kernel_from_povm(F)
        p = classical_distribution(K, mu)
        counts = simulate_outcomes(K, mu, draws, (cfg.seed + s) % 2**64)
        sigma = np.sqrt(draws * p * (1.0 - p))
        dev = np.abs(counts - draws * p)
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(sigma > 0, dev / sigma, np.where(dev > 0, np.inf, 0.0))
        acc["simulate.max_sigma"].add(float(np.max(z)) if draws else 0.0, draws)
    return _records(tols, acc)


def suite_sharp(cfg: ExperimentConfig, tols: dict) -> list[CheckRecord]:
    acc = {"sharp.residual_shortfall": _Acc()}
    n = cfg.samples_for("sharp-effect")
    if n:
        points, labels = balanced_hemisphere_labels(n, cfg.seed)
        res = sharp_effect_residual(points, labels)
        floor = SHARP_EFFECT_SLACK * bloch_affine_residual(points, labels)
        # a zero residual would mean some effect reproduces the sharp labels
        acc["sharp.residual_shortfall"].add(max(0.0, floor - res) if res > 0 else np.inf, n)
    return _records(tols, acc)


def bloch_affine_residual(points, labels) -> float:
    """Qubit-only reference: RMS of the best affine fit ``c0 + c . r`` in Bloch coordinates."""
    k = np.stack([p.ket for p in points])
    a, b = k[:, 0], k[:, 1]
    ab = a.conj() * b
    X = np.column_stack([np.ones(len(k)), 2 * ab.real, 2 * ab.imag, np.abs(a) ** 2 - np.abs(b) ** 2])
    y = np.asarray(labels, dtype=float)
    c, *_ = np.linalg.lstsq(X, y, rcond=None)
    return float(np.sqrt(np.mean((X @ c - y) ** 2)))


def balanced_hemisphere_labels(n: int, seed: int) -> tuple[list[PurePoint], np.ndarray]:
    """``n`` Haar qubit points; label 1 for the half with the largest ``tr(P |0><0|)``."""
    points = [PurePoint(k) for k in sample_haar_kets(2, n, seed)]
    e0 = basis_point(2, 0)
    t = np.array([transition_probability(P, e0) for P in points])
    labels = np.zeros(n, dtype=int)
    labels[np.argsort(t, kind="stable")[n - n // 2 :]] = 1
    return points, labels


def build_example(example: int, dim: int, rng, n_probe: int = 24):
    """An ``example1``/``example2``/``example3`` extension."""
    if example == 3:
        source = 2 * dim
        kets = np.vstack([example3_pure_kets(dim, n_probe, rng), sample_haar_kets(source, n_probe // 2, rng)])
        return example3(source, [PurePoint(k) for k in kets])
    U = random_haar_unitary(dim, rng)
    base = [PurePoint(k) for k in sample_haar_kets(dim, n_probe // 2, rng)]
    if example == 1:
        return example1(U, base)
    # close the probe set under P -> U* P U so that the two copies collide
    partners = [PurePoint(U.conj().T @ P.ket) for P in base]
    return example2(U, base + partners)


def suite_extension(cfg: ExperimentConfig, tols: dict) -> list[CheckRecord]:
    names = ("extension.representation", "extension.fiber", "extension.omega_tilde")
    acc = {n: _Acc() for n in names}
    examples = [cfg.example] if cfg.example else [1, 2, 3]
    dims = cfg.dims_for("extension")
    samples = cfg.samples_for("extension")
    for ex in examples:
        for d_index, dim in enumerate(dims):
            build_rng = child_rng(cfg.seed, (60 << 40) + 100 * ex + d_index)
            ext = build_example(ex, dim, build_rng)
            tilde = extract_omega_tilde(ext)
            i = index_map(ext)
            bad = set(i) != set(tilde) or any(
                purity(ext.assigned_states[lab]) >= 1.0 - 1e-9 for lab in ext.sample_points if lab not in i
            )
            acc["extension.omega_tilde"].add(float(bad))
            for k in range(samples):
                rng = child_rng(cfg.seed, (61 << 40) + 10_000 * (100 * ex + d_index) + k)
                n = int(rng.integers(1, min(len(tilde), 8) + 1))
                pick = rng.choice(len(tilde), size=n, replace=False)
                mu = DiscreteMeasure([tilde[j] for j in pick], rng.dirichlet(np.ones(n)))
                delta, _ = verify_representation(ext, mu, i)
                acc["extension.representation"].add(delta)
                # a Dirac measure reduces to a pure state; its fiber must carry all weight
                lab = tilde[int(rng.integers(len(tilde)))]
                fiber_mu = dirac(lab)
                P = to_pure_point(reduce_extension(ext, fiber_mu))
                acc["extension.fiber"].add(1.0 - pure_fiber_weight(ext, fiber_mu, P))
    return _records(tols, acc)


SUITES: dict[str, Callable[[ExperimentConfig, dict], list[CheckRecord]]] = {
    "verify-metrics": suite_metrics,
    "topology": suite_topology,
    "mb-roundtrip": suite_mb,
    "contextuality": suite_contextuality,
    "dirac-fiber": suite_dirac,
    "povm-kernel": suite_povm,
    "simulate": suite_simulate,
    "sharp-effect": suite_sharp,
    "extension": suite_extension,
}


def _config_echo(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    d.pop("out")
    return d


def run(config: ExperimentConfig) -> Report:
    """Run one experiment (or ``all``) and write the report if ``config.out`` is set."""
    config.validate()
    lib_tols = {k: v for k, v in config.tolerances.items() if k in Tolerances.names()}
    check_tols = {**CHECK_TOLERANCES, **{k: v for k, v in config.tolerances.items() if k in CHECK_TOLERANCES}}
    names = [e for e in EXPERIMENTS if e != "all"] if config.experiment == "all" else [config.experiment]
    start = time.perf_counter()
    checks: list[CheckRecord] = []
    with config_context(**lib_tols):
        for name in names:
            checks.extend(SUITES[name](config, check_tols))
    report = Report(
        experiment=config.experiment,
        config=_config_echo(config),
        checks=checks,
        wall_time=time.perf_counter() - start,
    )
    if config.out:
        write_report(report, config.out)
    return report


def write_report(report: Report, out: str) -> None:
    text = report.to_json() + "\n"
    if out == "-":
        import sys

        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {out}: {exc}") from exc


def load_config_file(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    if "dim" in data and "dims" not in data:
        d = data.pop("dim")
        data["dims"] = d if isinstance(d, list) else [d]
    allowed = {"experiment", "dims", "samples", "seed", "tolerances", "out", "example"}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown config field(s): {sorted(unknown)}")
    return data
