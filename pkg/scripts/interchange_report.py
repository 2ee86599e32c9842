"""Print the case analysis and the grouped families for built-in phases."""

import time
from dataclasses import dataclass

from _config import parse_config
from gl4bessel.interchange import builtin_phase, enumerate_cases


@dataclass
class Config:
    phases: tuple = ("121", "41", "211", "22", "1111")
    workers: int = 1
    show_cases: int = 0


def main(cfg: Config):
    for name in cfg.phases:
        start = time.perf_counter()
        report = enumerate_cases(builtin_phase(name), workers=cfg.workers)
        elapsed = time.perf_counter() - start
        families = report.family_lines()
        print(f"== w{name}: {len(report.entries)} subsets with cases, "
              f"{len(families)} families ({elapsed:.1f} s)")
        for line in families:
            print("  " + line)
        if cfg.show_cases:
            for line in report.lines():
                print("    " + line)


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
