"""Stochastic hill climbing on the quartic sidelobe fitness, with random kicks.

Each step scans all ``n`` single-flip neighbours circularly from a random
start and takes the first one with strictly smaller fitness. When none
exists the state is a local optimum and ``1 + R(K)`` distinct random
positions are flipped. Every probed sequence has its PSL checked, so the
best-PSL sequence seen is kept even if its fitness was rejected.
"""

import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import baselines, kernels
from .errors import ContractError
from .flip import flip_many
from .sequence import BinarySequence, compute_sidelobes, evaluate, parse_sequence

SCHEMA_VERSION = "pslopt.run-report/1"
TIMING_FIELDS = ("budget_seconds", "elapsed_seconds", "best_elapsed_seconds")

# Elements touched per kernel call before control returns to Python for a
# clock check; keeps budget overshoot small at large n.
_CHUNK_WORK = 1 << 22


@dataclass(frozen=True)
class RunConfig:
    length: int
    seed: int = 0
    budget_seconds: float = 60.0
    target_psl: int | None = None
    kick_max: int = 4
    init: str = "random"
    max_iterations: int | None = None
    reset_cost_after_kick: bool = True

    def __post_init__(self):
        if self.length < 2:
            raise ContractError(f"length must be > 1, got {self.length}")
        if not self.budget_seconds > 0:
            raise ContractError(f"time budget must be positive, got {self.budget_seconds}")
        if self.kick_max < 1:
            raise ContractError(f"kick bound must be >= 1, got {self.kick_max}")
        if self.target_psl is not None and self.target_psl < 0:
            raise ContractError(f"target PSL must be >= 0, got {self.target_psl}")
        if self.max_iterations is not None and self.max_iterations < 0:
            raise ContractError("max_iterations must be >= 0")
        if self.init not in baselines.FAMILIES and not self.init.startswith("file:"):
            raise ContractError(f"unknown init source {self.init!r}")


@dataclass
class RunReport:
    n: int
    seed: int
    budget_seconds: float
    best_psl: int
    best_fitness: int
    best_sequence: str
    final_cost: int
    iterations: int
    probes: int
    kicks: int
    elapsed_seconds: float
    best_elapsed_seconds: float
    stop_reason: str
    improvement_trace: list = field(default_factory=list)
    instance: int = 0
    instances: int = 1
    master_seed: int | None = None
    schema_version: str = SCHEMA_VERSION

    def to_dict(self):
        return asdict(self)

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)

    def without_timing(self):
        """The report as a dict with every wall-clock quantity stripped."""
        data = self.to_dict()
        for key in TIMING_FIELDS:
            data.pop(key)
        data["improvement_trace"] = [entry["psl"] for entry in data["improvement_trace"]]
        return data

    def sequence(self):
        return parse_sequence(self.best_sequence)


def initial_sequence(config, rng):
    if config.init.startswith("file:"):
        seq = BinarySequence.read(config.init[len("file:"):])
        if len(seq) != config.length:
            raise ContractError(
                f"initial sequence has length {len(seq)}, expected {config.length}"
            )
        return seq
    return baselines.generate(config.init, config.length, rng)


class OptimizerState:
    """Current sequence, its sidelobes, the acceptance cost and the PSL record."""

    def __init__(self, seq, rng, kick_max=4, reset_cost_after_kick=True, clock=time.perf_counter):
        self.seq = seq
        self.omega = compute_sidelobes(seq)
        self.rng = rng
        self.kick_max = kick_max
        self.reset_cost_after_kick = reset_cost_after_kick
        self.clock = clock
        self.started = clock()
        report = evaluate(self.omega)
        self.current_cost = report.fitness
        self.best_psl = report.psl
        self.best_spins = seq.spins.copy()
        self.best_elapsed = 0.0
        self.trace = [(0.0, report.psl)]
        self.iterations = 0
        self.probes = 0
        self.kicks = 0
        self.on_improvement = None

    @property
    def n(self):
        return len(self.seq)

    @property
    def best_sequence(self):
        return BinarySequence(self.best_spins)

    def elapsed(self):
        return self.clock() - self.started

    def _record(self, psl):
        self.best_psl = psl
        now = self.elapsed()
        self.best_elapsed = now
        self.trace.append((now, psl))
        if self.on_improvement is not None:
            self.on_improvement(psl, now)

    def scan_step(self, deadline=None):
        """Probe the ``n`` neighbours from a random start.

        Returns the accepted flip position, or ``None`` at a local optimum
        (state unchanged). With a ``deadline`` (a ``clock()`` value) the scan
        may also stop early and return ``None``; check the clock before
        treating that as a local optimum.
        """
        n = self.n
        start = int(self.rng.integers(n))
        self.iterations += 1
        chunk = max(1, _CHUNK_WORK // n)
        done = 0
        while done < n:
            count = min(chunk, n - done)
            pos, cost, best_psl, probes = kernels.scan_exact(
                self.seq.spins,
                self.omega.values,
                (start + done) % n,
                count,
                self.current_cost,
                self.best_psl,
                self.best_spins,
            )
            self.probes += probes
            if best_psl < self.best_psl:
                self._record(best_psl)
            if pos >= 0:
                self.current_cost = cost
                return pos
            done += count
            if deadline is not None and done < n and self.clock() >= deadline:
                return None
        return None

    def kick(self):
        """Flip ``1 + R(K)`` distinct random positions."""
        n = self.n
        x = min(1 + int(self.rng.integers(self.kick_max)), n)
        positions = self.rng.choice(n, size=x, replace=False)
        flip_many(positions, self.seq, self.omega)
        self.kicks += 1
        if self.reset_cost_after_kick:
            report = evaluate(self.omega)
            self.current_cost = report.fitness
            if report.psl < self.best_psl:
                self.best_spins[:] = self.seq.spins
                self._record(report.psl)
        return positions


def _stop_reason(state, config, deadline, stop_event):
    if config.target_psl is not None and state.best_psl <= config.target_psl:
        return "target"
    if config.max_iterations is not None and state.iterations >= config.max_iterations:
        return "iterations"
    if state.clock() >= deadline:
        return "budget"
    if stop_event is not None and stop_event.is_set():
        return "stopped"
    return None


def run(config, stop_event=None, on_improvement=None, instance=0, instances=1, master_seed=None):
    """One optimisation run; stops on budget, target PSL, iteration cap or
    ``stop_event``, whichever comes first.

    ``on_improvement(psl, elapsed)`` fires on every new best PSL, from the
    thread doing the run.
    """
    rng = np.random.default_rng(config.seed)
    seq = initial_sequence(config, rng)
    state = OptimizerState(seq, rng, config.kick_max, config.reset_cost_after_kick)
    state.on_improvement = on_improvement
    if on_improvement is not None:
        on_improvement(state.best_psl, 0.0)
    deadline = state.started + config.budget_seconds
    while (reason := _stop_reason(state, config, deadline, stop_event)) is None:
        if state.scan_step(deadline) is None and state.clock() < deadline:
            state.kick()
    report = _report(state, config, reason, instance, instances)
    report.master_seed = config.seed if master_seed is None else master_seed
    return report


def _report(state, config, reason, instance, instances):
    best = state.best_sequence
    return RunReport(
        n=state.n,
        seed=config.seed,
        budget_seconds=config.budget_seconds,
        best_psl=state.best_psl,
        best_fitness=evaluate(compute_sidelobes(best)).fitness,
        best_sequence=best.to_text(),
        final_cost=state.current_cost,
        iterations=state.iterations,
        probes=state.probes,
        kicks=state.kicks,
        elapsed_seconds=state.elapsed(),
        best_elapsed_seconds=state.best_elapsed,
        stop_reason=reason,
        improvement_trace=[{"elapsed_seconds": t, "psl": p} for t, p in state.trace],
        instance=instance,
        instances=instances,
    )


def instance_seed(master_seed, index):
    """Seed for instance ``index`` of a campaign.

    Instance 0 keeps the master seed (so a one-instance campaign is a plain
    run); instance ``i > 0`` takes 64 bits from
    ``SeedSequence(master_seed, spawn_key=(i,))``.
    """
    if index == 0:
        return int(master_seed)
    words = np.random.SeedSequence(master_seed, spawn_key=(index,)).generate_state(2)
    return int(words[0]) << 32 | int(words[1])


class GlobalBest:
    """Campaign-wide best PSL; touched only on improvements, never per probe."""

    def __init__(self, target_psl=None, stop_event=None, on_improvement=None):
        self.psl = None
        self.target_psl = target_psl
        self.stop_event = stop_event
        self.on_improvement = on_improvement
        self._lock = threading.Lock()

    def offer(self, psl, elapsed):
        with self._lock:
            if self.psl is not None and psl >= self.psl:
                return
            self.psl = psl
            if self.on_improvement is not None:
                self.on_improvement(psl, elapsed)
            if self.target_psl is not None and psl <= self.target_psl and self.stop_event:
                self.stop_event.set()


def aggregate(reports):
    """Lowest best_psl wins; ties go to whoever got there first."""
    return min(reports, key=lambda r: (r.best_psl, r.best_elapsed_seconds, r.instance))


def run_parallel(config, instances, on_improvement=None):
    """Independent runs on distinct seeds in a thread pool (kernels release
    the GIL); returns the winning report."""
    if instances < 1:
        raise ContractError(f"instances must be >= 1, got {instances}")
    if instances == 1:
        return run(config, on_improvement=on_improvement)
    stop_event = threading.Event()
    best = GlobalBest(config.target_psl, stop_event, on_improvement)
    configs = [replace(config, seed=instance_seed(config.seed, i)) for i in range(instances)]
    with ThreadPoolExecutor(max_workers=instances) as pool:
        futures = [
            pool.submit(run, cfg, stop_event, best.offer, i, instances, config.seed)
            for i, cfg in enumerate(configs)
        ]
        reports = [f.result() for f in futures]
    return aggregate(reports)


def write_trace_csv(report, path):
    lines = ["elapsed_seconds,psl"]
    lines += [f"{e['elapsed_seconds']:.6f},{e['psl']}" for e in report.improvement_trace]
    Path(path).write_text("\n".join(lines) + "\n")
