"""Monte-Carlo estimates of how often random pairs are injective and conjugacy separated."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .stallings import conjugacy_separated, is_injective
from .words import Alphabet, Homomorphism, Word

CSV_HEADER = "n,m,k,trials,frac_injective,frac_separated,frac_both,seed"


@dataclass(frozen=True)
class ExperimentConfig:
    """``m`` domain generators, ``k`` codomain generators, images of length at most ``n``."""

    m: int
    k: int
    n: int
    trials: int
    seed: int = 0
    sphere: bool = False

    def __post_init__(self):
        if self.m < 1 or self.k < 2 or self.n < 0 or self.trials < 1:
            raise ValueError("need m >= 1, k >= 2, n >= 0 and trials >= 1")


@dataclass(frozen=True)
class ExperimentStats:
    config: ExperimentConfig
    injective: int
    separated: int
    both: int

    @property
    def trials(self) -> int:
        return self.config.trials

    @property
    def frac_injective(self) -> Fraction:
        return Fraction(self.injective, self.trials)

    @property
    def frac_separated(self) -> Fraction:
        return Fraction(self.separated, self.trials)

    @property
    def frac_both(self) -> Fraction:
        return Fraction(self.both, self.trials)

    def csv_row(self) -> str:
        c = self.config
        return (
            f"{c.n},{c.m},{c.k},{c.trials},{float(self.frac_injective):.4f},"
            f"{float(self.frac_separated):.4f},{float(self.frac_both):.4f},{c.seed}"
        )


def ball_length_weights(k: int, n: int) -> np.ndarray:
    """Number of reduced words of each length ``0..n`` over ``k`` generators."""
    w = np.empty(n + 1, dtype=float)
    w[0] = 1.0
    for length in range(1, n + 1):
        w[length] = 2 * k * float(2 * k - 1) ** (length - 1)
    return w


def sample_reduced_word(alphabet: Alphabet, n: int, rng: np.random.Generator, sphere: bool = False) -> Word:
    """A reduced word drawn uniformly from the ball (or sphere) of radius ``n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    k = len(alphabet)
    if k == 0 or n == 0:
        return alphabet.identity()
    if sphere:
        length = n
    else:
        w = ball_length_weights(k, n)
        length = int(rng.choice(n + 1, p=w / w.sum()))
    codes = []
    for _ in range(length):
        if not codes:
            c = int(rng.integers(2 * k))
        else:
            # skip the inverse of the previous letter
            banned = _index(-codes[-1])
            c = int(rng.integers(2 * k - 1))
            if c >= banned:
                c += 1
        codes.append(_code(c))
    return Word._trusted(alphabet, tuple(codes))


def _code(index: int) -> int:
    g, s = divmod(index, 2)
    return -(g + 1) if s else g + 1


def _index(code: int) -> int:
    return 2 * (abs(code) - 1) + (code < 0)


def _alphabets(cfg: ExperimentConfig):
    dom = Alphabet([f"x{i + 1}" for i in range(cfg.m)])
    cod = Alphabet([f"a{i + 1}" for i in range(cfg.k)])
    return dom, cod


def sample_pair(cfg: ExperimentConfig, rng: np.random.Generator) -> tuple[Homomorphism, Homomorphism]:
    dom, cod = _alphabets(cfg)
    g = [sample_reduced_word(cod, cfg.n, rng, cfg.sphere) for _ in range(cfg.m)]
    h = [sample_reduced_word(cod, cfg.n, rng, cfg.sphere) for _ in range(cfg.m)]
    return Homomorphism(dom, cod, g), Homomorphism(dom, cod, h)


def _run_trial(args):
    cfg, seq = args
    g, h = sample_pair(cfg, np.random.default_rng(seq))
    inj = is_injective(g) and is_injective(h)
    sep = conjugacy_separated(g, h)
    return inj, sep


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentStats:
    """Sample ``cfg.trials`` pairs; each trial uses its own seed substream."""
    seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    jobs = [(cfg, s) for s in seqs]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_trial, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_run_trial(j) for j in jobs]
    inj = sum(1 for a, _ in results if a)
    sep = sum(1 for _, b in results if b)
    both = sum(1 for a, b in results if a and b)
    return ExperimentStats(cfg, inj, sep, both)
