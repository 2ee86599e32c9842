"""Tiny helper: expose a dataclass config as argparse flags."""

import argparse
import dataclasses


def parse_config(cls, description):
    parser = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        default = f.default
        kind = type(default)
        if kind is tuple:
            parser.add_argument(f"--{f.name.replace('_', '-')}", nargs="+",
                                type=type(default[0]), default=default)
        else:
            parser.add_argument(f"--{f.name.replace('_', '-')}", type=kind, default=default)
    args = parser.parse_args()
    values = {f.name: getattr(args, f.name) for f in dataclasses.fields(cls)}
    return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in values.items()})
