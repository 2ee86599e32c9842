"""Write Frobenius coefficient lattices for one tempered draw to CSV files."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from _config import parse_config
from gl4bessel.frobenius import FrobeniusSeries
from gl4bessel.weyl import KERNEL_NAMES, WeylElement, sample_tempered


@dataclass
class Config:
    out_dir: str = "lattices"
    order: int = 6
    seed: int = 0
    form: str = "a"


def main(cfg: Config):
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    mu = sample_tempered(np.random.default_rng(cfg.seed)).mu
    for name in KERNEL_NAMES:
        series = FrobeniusSeries.build(WeylElement.from_name(name), mu, cfg.order, cfg.form)
        path = out / f"w{name}_order{cfg.order}.csv"
        series.dump_csv(path)
        print(f"{path}: {series.coeffs.size} coefficients")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
