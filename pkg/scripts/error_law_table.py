"""Deviation l - <J> of the angular-momentum expectation against the
leading-order law 2 pi exp(-pi^2) sin(2 pi (l - j0)).

    python scripts/error_law_table.py --step 0.05 --j0 0
"""
from __future__ import annotations

import argparse
import math
from dataclasses import dataclass

import numpy as np

from torus_coherent import circle_cs


@dataclass
class ErrorLawConfig:
    lmin: float = -3.0
    lmax: float = 3.0
    step: float = 0.05
    j0: float = 0.0  # 0 or 1/2


def table(cfg: ErrorLawConfig) -> np.ndarray:
    n = int(round((cfg.lmax - cfg.lmin) / cfg.step))
    l = np.round(cfg.lmin + cfg.step * np.arange(n + 1), 12)
    dev = l - circle_cs.expect_J1d(l, cfg.j0)
    law = circle_cs.classical_error_law(l, cfg.j0)
    return np.column_stack([l, dev, law])


def main(cfg: ErrorLawConfig) -> int:
    rows = table(cfg)
    print("l\tdeviation\tlaw\tratio")
    for l, dev, law in rows:
        ratio = dev / law if abs(law) > 1e-12 else float("nan")
        print(f"{l:.4f}\t{dev:.6e}\t{law:.6e}\t{ratio:.6f}")
    dev, law = rows[:, 1], rows[:, 2]
    mask = np.abs(np.sin(2 * math.pi * (rows[:, 0] - cfg.j0))) > 0.2
    print(f"# max |deviation| = {np.max(np.abs(dev)):.6e} "
          f"(law amplitude {2 * math.pi * math.exp(-math.pi ** 2):.6e})")
    if mask.any():
        print(f"# max relative misfit where |sin| > 0.2: "
              f"{np.max(np.abs(dev[mask] - law[mask]) / np.abs(law[mask])):.3e}")
    return 0


if __name__ == "__main__":
    d = ErrorLawConfig()
    ap = argparse.ArgumentParser(description="error-law table")
    ap.add_argument("--lmin", type=float, default=d.lmin)
    ap.add_argument("--lmax", type=float, default=d.lmax)
    ap.add_argument("--step", type=float, default=d.step)
    ap.add_argument("--j0", type=float, default=d.j0)
    a = ap.parse_args()
    raise SystemExit(main(ErrorLawConfig(a.lmin, a.lmax, a.step, a.j0)))
