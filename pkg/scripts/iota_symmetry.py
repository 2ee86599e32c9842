"""Relative gap between K_w and its iota transform for the self-dual kernels."""

from dataclasses import dataclass

import numpy as np

from _config import parse_config
from gl4bessel.suites import iota_gap
from gl4bessel.weyl import sample_tempered


@dataclass
class Config:
    draws: int = 4
    seed: int = 0
    order: int = 10
    amplitudes: tuple = (0.01, 0.03, 0.06)
    mode: str = "Y"


def main(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    print(f"{'weyl':>5} {'amp':>6} {'worst gap':>10}")
    for name, dim in (("22", 1), ("121", 2), ("1111", 3)):
        for amp in cfg.amplitudes:
            worst = 0.0
            for _ in range(cfg.draws):
                delta = tuple(int(d) for d in rng.integers(0, 2, 4))
                params = sample_tempered(rng, delta=delta)
                free = tuple(amp * rng.choice((-1, 1)) for _ in range(dim))
                worst = max(worst, iota_gap(name, free, params, cfg.order, cfg.mode))
            print(f"{name:>5} {amp:6.3f} {worst:10.2e}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
