"""BPSK over AWGN, log-domain sum-product decoding, BER campaigns and
regular Gallager baselines."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.sparse as sp

from .gf2 import SparseBinaryMatrix, code_dimension

LLR_CLAMP = 30.0
EPS = 1e-12
THREADS_ENV = "CONICLDPC_THREADS"


class LengthMismatch(ValueError):
    pass


class InvalidDivisibility(ValueError):
    pass


# --- channel --------------------------------------------------------------


@dataclass(frozen=True)
class ChannelPoint:
    eb_n0_db: float
    rate: float

    def __post_init__(self):
        if not 0 < self.rate < 1:
            raise ValueError(f"code rate {self.rate} outside (0, 1)")

    @property
    def sigma(self) -> float:
        return math.sqrt(1.0 / (2.0 * self.rate * 10 ** (self.eb_n0_db / 10.0)))


def snr_grid(spec: str) -> list[float]:
    """Parse ``start:step:stop`` (inclusive) or a comma list into dB values."""
    if ":" in spec:
        start, step, stop = (float(v) for v in spec.split(":"))
        if step <= 0:
            raise ValueError("SNR step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 10) for i in range(count)]
    return [float(v) for v in spec.split(",") if v.strip()]


# --- decoder --------------------------------------------------------------


class SumProductDecoder:
    """Flooding sum-product decoder for a fixed parity-check matrix.

    Messages live on the edges of the Tanner graph, stored in CSR order
    (grouped by check).  Works on a batch of frames at once.
    """

    def __init__(self, H: SparseBinaryMatrix):
        self.H = H
        self.n = H.n_cols
        self.m = H.n_rows
        self.edge_check = np.repeat(np.arange(self.m), H.row_weights())
        self.edge_var = H.indices.copy()
        n_edges = self.edge_var.size
        ones = np.ones(n_edges)
        eid = np.arange(n_edges)
        # edge -> check and edge -> variable summation operators
        self._to_check = sp.csr_matrix((ones, (self.edge_check, eid)), shape=(self.m, n_edges))
        self._to_var = sp.csr_matrix((ones, (self.edge_var, eid)), shape=(self.n, n_edges))
        self._H = H.to_scipy()

    def syndrome(self, hard: np.ndarray) -> np.ndarray:
        """Syndromes of a batch of hard decisions, one row per frame."""
        return (self._H @ hard.T.astype(np.int64)).T % 2

    def _check_update(self, v2c: np.ndarray) -> np.ndarray:
        t = np.tanh(np.clip(v2c, -LLR_CLAMP, LLR_CLAMP) / 2.0)
        neg = t < 0
        logmag = np.log(np.maximum(np.abs(t), EPS))
        # per-check totals, then remove each edge's own contribution
        tot = (self._to_check @ logmag.T).T
        parity = np.rint((self._to_check @ neg.T.astype(np.float64)).T).astype(np.int64) & 1
        ext_mag = np.exp(tot[:, self.edge_check] - logmag)
        ext_neg = parity[:, self.edge_check].astype(bool) ^ neg
        ext = 2.0 * np.arctanh(np.minimum(ext_mag, 1.0 - EPS))
        ext = np.minimum(ext, LLR_CLAMP)
        return np.where(ext_neg, -ext, ext)

    def decode(self, llr: np.ndarray, max_iter: int = 50):
        """Decode a batch (frames x n) or a single frame of channel LLRs.

        Returns (hard decisions, converged flags, iterations used), with
        the same leading shape as the input.  Iterations count from 1.
        """
        llr = np.asarray(llr, dtype=np.float64)
        single = llr.ndim == 1
        if single:
            llr = llr[None, :]
        if llr.shape[1] != self.n:
            raise LengthMismatch(f"got {llr.shape[1]} LLRs for a length-{self.n} code")
        if max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        B = llr.shape[0]
        hard = (llr < 0).astype(np.uint8)
        converged = np.zeros(B, dtype=bool)
        iters = np.full(B, max_iter, dtype=np.int64)
        active = np.arange(B)
        ch = llr
        v2c = ch[:, self.edge_var]
        for it in range(1, max_iter + 1):
            c2v = self._check_update(v2c)
            total = ch + (self._to_var @ c2v.T).T
            dec = (total < 0).astype(np.uint8)
            hard[active] = dec
            ok = ~np.any(self.syndrome(dec), axis=1)
            if ok.any():
                converged[active[ok]] = True
                iters[active[ok]] = it
                keep = ~ok
                active, ch, total, c2v = active[keep], ch[keep], total[keep], c2v[keep]
                if active.size == 0:
                    break
            v2c = total[:, self.edge_var] - c2v
        if single:
            return hard[0], bool(converged[0]), int(iters[0])
        return hard, converged, iters


def sum_product_decode(H: SparseBinaryMatrix, llr_in, max_iter: int = 50):
    """One-shot helper: (hard decision, converged, iterations) for one frame."""
    return SumProductDecoder(H).decode(np.asarray(llr_in, dtype=np.float64), max_iter)


# --- simulation -----------------------------------------------------------


@dataclass
class PointResult:
    eb_n0_db: float
    sigma: float
    trials: int = 0
    bit_errors: int = 0
    frame_errors: int = 0
    iterations: int = 0
    n: int = 0

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.trials * self.n) if self.trials else float("nan")

    @property
    def fer(self) -> float:
        return self.frame_errors / self.trials if self.trials else float("nan")

    @property
    def avg_iters(self) -> float:
        return self.iterations / self.trials if self.trials else float("nan")


CSV_COLUMNS = ("eb_n0_db", "trials", "bit_errors", "frame_errors", "ber", "fer", "avg_iters")


@dataclass
class SimulationResult:
    n: int
    k: int
    points: list[PointResult]
    config: dict = field(default_factory=dict)

    @property
    def rate(self) -> float:
        return self.k / self.n

    def rows(self) -> list[dict]:
        return [
            {
                "eb_n0_db": p.eb_n0_db,
                "trials": p.trials,
                "bit_errors": p.bit_errors,
                "frame_errors": p.frame_errors,
                "ber": p.ber,
                "fer": p.fer,
                "avg_iters": p.avg_iters,
            }
            for p in self.points
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows():
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "k": self.k, "config": self.config, "points": self.rows()}, indent=2)


def _simulate_point(
    decoder: SumProductDecoder,
    point: ChannelPoint,
    seed_seq: np.random.SeedSequence,
    min_trials: int,
    max_trials: int,
    target_errors: int,
    max_iter: int,
    batch: int,
) -> PointResult:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    n = decoder.n
    sigma = point.sigma
    res = PointResult(point.eb_n0_db, sigma, n=n)
    while res.trials < max_trials and (res.trials < min_trials or res.frame_errors < target_errors):
        size = min(batch, max_trials - res.trials)
        # all-zero codeword, BPSK 0 -> +1
        y = 1.0 + sigma * rng.standard_normal((size, n))
        llr = 2.0 * y / sigma**2
        hard, _, iters = decoder.decode(llr, max_iter)
        errs = hard.sum(axis=1, dtype=np.int64)
        res.trials += size
        res.bit_errors += int(errs.sum())
        res.frame_errors += int(np.count_nonzero(errs))
        res.iterations += int(iters.sum())
    return res


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def simulate_ber(
    H: SparseBinaryMatrix,
    snr_points,
    min_trials: int = 1000,
    max_trials: int = 100_000,
    target_errors: int = 100,
    max_iter: int = 50,
    seed: int = 0,
    batch: int = 500,
    threads: int | None = None,
) -> SimulationResult:
    """BER/FER curve of H under sum-product decoding.

    ``snr_points`` are Eb/N0 values in dB (or ChannelPoint objects).  Each
    point gets its own PCG64 stream spawned from ``seed``, so results do not
    depend on the thread count.
    """
    n = H.n_cols
    k = code_dimension(H)
    rate = k / n
    points = [p if isinstance(p, ChannelPoint) else ChannelPoint(float(p), rate) for p in snr_points]
    decoder = SumProductDecoder(H)
    streams = np.random.SeedSequence(seed).spawn(len(points))
    args = (min_trials, max_trials, target_errors, max_iter, batch)
    threads = threads or _thread_count()

    def run(i: int) -> PointResult:
        return _simulate_point(decoder, points[i], streams[i], *args)

    if threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(len(points))))
    else:
        results = [run(i) for i in range(len(points))]
    config = {
        "seed": seed,
        "min_trials": min_trials,
        "max_trials": max_trials,
        "target_errors": target_errors,
        "max_iter": max_iter,
        "batch": batch,
        "rng": "numpy PCG64, one SeedSequence child per SNR point",
        "eb_n0_db": [p.eb_n0_db for p in points],
    }
    return SimulationResult(n, k, results, config)


# --- Gallager ensemble ----------------------------------------------------


@dataclass(frozen=True)
class GallagerSpec:
    n: int
    row_weight: int
    col_weight: int
    seed: int = 0

    def __post_init__(self):
        if self.row_weight < 1 or self.col_weight < 1:
            raise InvalidDivisibility("weights must be positive")
        if self.n % self.row_weight:
            raise InvalidDivisibility(f"n={self.n} is not a multiple of row_weight={self.row_weight}")

    @classmethod
    def parse(cls, text: str) -> "GallagerSpec":
        """Parse ``n=576,row=9,col=6[,seed=1]``."""
        keys = {"n": "n", "row": "row_weight", "col": "col_weight", "seed": "seed"}
        kw = {}
        for part in text.split(","):
            name, _, value = part.partition("=")
            name = name.strip()
            if name not in keys:
                raise ValueError(f"unknown Gallager field {name!r}")
            kw[keys[name]] = int(value)
        return cls(**kw)

    def as_dict(self) -> dict:
        return asdict(self)


def _duplicate_columns(bands: list[np.ndarray]) -> int:
    """Number of columns that repeat an earlier one (band rows per column)."""
    cols = np.stack(bands, axis=1)  # (n, col_weight) row index in each band
    _, counts = np.unique(cols, axis=0, return_counts=True)
    return int(np.sum(counts - 1))


def gallager_code(spec: GallagerSpec, max_attempts: int = 100) -> SparseBinaryMatrix:
    """Regular (col_weight, row_weight) matrix from stacked permuted bands.

    Band 0 puts columns j*row_weight .. (j+1)*row_weight - 1 on row j; every
    further band is a seeded random column permutation of it.  Draws whose
    columns repeat are resampled up to ``max_attempts`` times.
    """
    n, wr, wc = spec.n, spec.row_weight, spec.col_weight
    rows_per_band = n // wr
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    base = np.arange(n) // wr  # row of column j in band 0
    best, best_dups = None, None
    for _ in range(max_attempts):
        bands = [base]
        for _ in range(wc - 1):
            perm = rng.permutation(n)
            inv = np.empty(n, dtype=np.int64)
            inv[perm] = np.arange(n)
            bands.append(base[inv])
        dups = _duplicate_columns(bands)
        if best is None or dups < best_dups:
            best, best_dups = bands, dups
        if dups == 0:
            break
    if best_dups:
        warnings.warn(f"Gallager matrix keeps {best_dups} duplicate column(s)", RuntimeWarning, stacklevel=2)
    rows: list[list[int]] = [[] for _ in range(rows_per_band * wc)]
    for b, band in enumerate(best):
        for j, r in enumerate(band.tolist()):
            rows[b * rows_per_band + r].append(j)
    return SparseBinaryMatrix.from_rows(rows, n)
