"""Compare Mellin-Barnes quadrature with the Frobenius coset sum; CSV to stdout."""

import csv
import sys
import time
import warnings
from dataclasses import dataclass

import numpy as np

from _config import parse_config
from gl4bessel.errors import TruncationWarning
from gl4bessel.mellin_barnes import ContourConfig, kernel_K, mb_eval
from gl4bessel.weyl import WeylElement, YPoint, sample_tempered


@dataclass
class Config:
    weyl: str = "31"
    draws: int = 5
    seed: int = 0
    amplitude: float = 0.05
    order: int = 20
    rtol: float = 1e-8


def main(cfg: Config):
    w = WeylElement.from_name(cfg.weyl)
    free_dim = {"31": 1, "22": 1, "121": 2, "211": 2, "1111": 3}[cfg.weyl]
    rng = np.random.default_rng(cfg.seed)
    out = csv.writer(sys.stdout)
    out.writerow(["draw", "free", "mb_re", "mb_im", "mb_err", "series_re", "series_im",
                  "ratio_re", "ratio_im", "seconds"])
    for k in range(cfg.draws):
        delta = tuple(int(d) for d in rng.integers(0, 2, 4))
        params = sample_tempered(rng, delta=delta)
        free = tuple(float(cfg.amplitude * rng.choice((-1, 1))) for _ in range(free_dim))
        y = YPoint.on(w, free)
        start = time.perf_counter()
        result = mb_eval(w, y, params, ContourConfig.default(w, rtol=cfg.rtol))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            series = kernel_K(w, y, params, order=cfg.order)
        ratio = result.value / series
        out.writerow([k, " ".join(map(repr, free)), result.value.real, result.value.imag,
                      result.error, series.real, series.imag, ratio.real, ratio.imag,
                      f"{time.perf_counter() - start:.2f}"])


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
