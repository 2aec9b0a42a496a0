"""Chord recovery from target feature curves, plus the recovery-deviation metric.

The recoverer runs a beam search over per-step candidates.  A candidate is a
(library entry, minimal-diameter spelling) pair, so every tied spelling of a
chord is a separate hypothesis; per-step cost is the weighted absolute
deviation of achieved tension / distance / strain from the targets, with the
distance term absent on the first step.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, InputError
from .features import FEATURE_NAMES, FeatureSequence, key_point_for
from .library import ChordLibrary
from .spiral import SpiralParams

_COST_EPS = 1e-9


@dataclass(frozen=True)
class RecoveryConfig:
    library: ChordLibrary
    tonality: int
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    beam_width: int = 8
    workers: int = 1

    def __post_init__(self) -> None:
        if not 0 <= self.tonality <= 23:
            raise ConfigurationError(f"tonality must lie in 0..23, got {self.tonality}")
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ConfigurationError("recovery weights must be non-negative")
        if self.alpha + self.gamma <= 0 or self.alpha + self.beta + self.gamma <= 0:
            raise ConfigurationError("recovery weights must not all be zero")
        if self.beam_width < 1:
            raise ConfigurationError("beam width must be >= 1")
        if self.workers < 1:
            raise ConfigurationError("worker count must be >= 1")
        if len(self.library) == 0:
            raise ConfigurationError("chord library is empty after filtering")

    @property
    def first_step_weights(self) -> tuple[float, float]:
        s = self.alpha + self.gamma
        return self.alpha / s, self.gamma / s

    @property
    def step_weights(self) -> tuple[float, float, float]:
        s = self.alpha + self.beta + self.gamma
        return self.alpha / s, self.beta / s, self.gamma / s


@dataclass
class RecoveryResult:
    chords: list[tuple[str, ...]]
    spellings: list[tuple[int, ...]]
    achieved: FeatureSequence
    total_cost: float
    per_step_rd: list[float]

    def to_dict(self) -> dict:
        return {
            "chords": [list(c) for c in self.chords],
            "spellings": [list(s) for s in self.spellings],
            "achieved": self.achieved.to_dict(),
            "total_cost": self.total_cost,
            "per_step_rd": list(self.per_step_rd),
        }


class _CandidateTable:
    """Flat arrays over every (entry, spelling) candidate, in global tie-break order."""

    def __init__(self, library: ChordLibrary, key_point) -> None:
        tension, centers, entry_idx, member_idx = [], [], [], []
        for e, entry in enumerate(library.entries):
            for m, sp in enumerate(entry.spellings):
                tension.append(sp.diameter)
                centers.append(sp.center)
                entry_idx.append(e)
                member_idx.append(m)
        self.tension = np.asarray(tension)
        self.centers = np.asarray(centers)
        self.strain = np.linalg.norm(self.centers - np.asarray(key_point), axis=1)
        self.entry_idx = np.asarray(entry_idx)
        self.member_idx = np.asarray(member_idx)
        self.n = len(tension)


def _chunked_costs(fn, n: int, workers: int) -> np.ndarray:
    """Evaluate fn over index ranges, optionally on a thread pool; order-stable concat."""
    if workers == 1:
        return fn(0, n)
    bounds = np.linspace(0, n, workers + 1, dtype=int)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda ab: fn(*ab), zip(bounds[:-1], bounds[1:])))
    return np.concatenate(parts, axis=-1)


def _select_top(costs: np.ndarray, width: int, n_candidates: int) -> np.ndarray:
    """Indices of the best `width` flat candidates by (cost, candidate rank, state rank)."""
    flat = costs.reshape(-1)
    states = flat.size // n_candidates
    q = np.round(flat / _COST_EPS).astype(np.int64)
    cand_rank = np.tile(np.arange(n_candidates, dtype=np.int64), states)
    state_rank = np.repeat(np.arange(states, dtype=np.int64), n_candidates)
    key = (q * n_candidates + cand_rank) * states + state_rank
    width = min(width, flat.size)
    part = np.argpartition(key, width - 1)[:width]
    return part[np.argsort(key[part], kind="stable")]


def _run_beam(
    table: _CandidateTable,
    t_hat: np.ndarray,
    d_hat: np.ndarray,
    s_hat: np.ndarray,
    config: RecoveryConfig,
    width: int,
) -> tuple[float, list[int]]:
    a1, g1 = config.first_step_weights
    a, b, g = config.step_weights

    # First step: no distance term, a single virtual predecessor state.
    first = a1 * np.abs(table.tension - t_hat[0]) + g1 * np.abs(table.strain - s_hat[0])
    chosen = _select_top(first, width, table.n)
    beam_cost = first[chosen]
    beam_centers = table.centers[chosen]
    back: list[tuple[np.ndarray, np.ndarray]] = [(np.zeros(len(chosen), dtype=int), chosen)]

    for i in range(1, len(t_hat)):
        tension_dev = a * np.abs(table.tension - t_hat[i])
        strain_dev = g * np.abs(table.strain - s_hat[i])

        def step_costs(lo: int, hi: int) -> np.ndarray:
            d = np.linalg.norm(table.centers[None, lo:hi, :] - beam_centers[:, None, :], axis=2)
            return b * np.abs(d - d_hat[i]) + (tension_dev + strain_dev)[None, lo:hi]

        costs = beam_cost[:, None] + _chunked_costs(step_costs, table.n, config.workers)
        flat = _select_top(costs, width, table.n)
        state_idx, cand_idx = flat // table.n, flat % table.n
        beam_cost = costs.reshape(-1)[flat]
        beam_centers = table.centers[cand_idx]
        back.append((state_idx, cand_idx))

    # Walk back from the best final state (selection order puts it first).
    path = []
    state = 0
    for state_idx, cand_idx in reversed(back):
        path.append(int(cand_idx[state]))
        state = int(state_idx[state])
    path.reverse()
    return float(beam_cost[0]), path


def recover(targets: FeatureSequence, config: RecoveryConfig) -> RecoveryResult:
    """Reconstruct a chord progression whose feature curves track the targets.

    The search runs the configured beam width plus every power of two below
    it and keeps the cheapest result, so widening the beam along a doubling
    chain never worsens the outcome (plain beam search does not guarantee
    that; a wider front can evict a prefix that completes better).
    """
    targets = targets.denormalized()
    t_hat = np.asarray(targets.tension)
    d_hat = np.asarray(targets.distance)
    s_hat = np.asarray(targets.strain)
    steps = targets.length

    key_point = key_point_for(config.tonality, config.library.params)
    table = _CandidateTable(config.library, key_point)

    widths = [config.beam_width]
    w = 1
    while w < config.beam_width:
        widths.append(w)
        w *= 2
    best_cost, path = math.inf, None
    for width in sorted(set(widths), reverse=True):
        cost, candidate_path = _run_beam(table, t_hat, d_hat, s_hat, config, width)
        if cost < best_cost - _COST_EPS:
            best_cost, path = cost, candidate_path
        if best_cost < _COST_EPS:
            break

    entries = [config.library.entries[table.entry_idx[j]] for j in path]
    rows = [entries[i].spellings[table.member_idx[path[i]]] for i in range(steps)]
    tension = [table.tension[j] for j in path]
    strain = [float(table.strain[j]) for j in path]
    distance = [0.0] + [
        float(np.linalg.norm(np.asarray(rows[i].center) - np.asarray(rows[i - 1].center)))
        for i in range(1, steps)
    ]
    achieved = FeatureSequence(
        [float(v) for v in tension], distance, strain, config.tonality
    )
    rd = per_step_rd(achieved, targets)
    return RecoveryResult(
        chords=[e.labels for e in entries],
        spellings=[r.indices for r in rows],
        achieved=achieved,
        total_cost=best_cost,
        per_step_rd=rd,
    )


def per_step_rd(achieved: FeatureSequence, targets: FeatureSequence) -> list[float]:
    """Unweighted absolute deviation per step; the distance term is absent at step 1."""
    if achieved.length != targets.length:
        raise InputError("achieved and target sequences differ in length")
    out = []
    for i in range(targets.length):
        rd = abs(achieved.tension[i] - targets.tension[i]) + abs(achieved.strain[i] - targets.strain[i])
        if i > 0:
            rd += abs(achieved.distance[i] - targets.distance[i])
        out.append(rd)
    return out


def mrda(per_sample_rd: list[list[float]]) -> float:
    """Mean over samples of the per-step mean recovery deviation."""
    if not per_sample_rd:
        raise InputError("MRDA of zero samples is undefined")
    return float(np.mean([np.mean(rd) for rd in per_sample_rd]))


def random_features(
    ranges: dict[str, tuple[float, float]],
    length: int,
    seed: int,
    tonality: int | None = None,
) -> FeatureSequence:
    """Uniform random target curves within per-feature ranges; distance[0] forced to 0."""
    if length < 1:
        raise InputError("length must be >= 1")
    rng = np.random.default_rng(seed)
    arrays = {}
    for name in FEATURE_NAMES:
        lo, hi = ranges[name]
        if lo > hi or lo < 0:
            raise InputError(f"invalid range for {name}: ({lo}, {hi})")
        arrays[name] = [float(v) for v in rng.uniform(lo, hi, size=length)]
    arrays["distance"][0] = 0.0
    if tonality is None:
        tonality = int(rng.integers(0, 24))
    return FeatureSequence(arrays["tension"], arrays["distance"], arrays["strain"], tonality)
