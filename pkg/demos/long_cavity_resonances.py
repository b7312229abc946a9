"""Resonances of the fundamental sinusoidal mode at huge cavity length.

At interaction length 1e5 the barrier branch is fully opaque, so the
emission probability is carried by the well branch alone. A cold atom
(k = 0.01 in cavity units) sees sharp transmission resonances; a warm
atom (k = 0.1) sees none and the probability pins to one half. The
sweep covers ten length units above 1e5 in steps of 0.05.
"""

import numpy as np

from mazersim import MazerParams, ModeShape, sweep_kappaL


def trace(k: float) -> tuple[np.ndarray, np.ndarray]:
    params = MazerParams.for_shape(ModeShape.SIN_FUNDAMENTAL, k, 1.0, 100)
    table = sweep_kappaL(params, 1.0e5, 1.0e5 + 10.0, 0.05)
    L = np.array([row.kappaL for row in table.rows])
    P = np.array([row.P_em for row in table.rows])
    return L, P


def sparkline(P: np.ndarray, rows: int = 8) -> list[str]:
    # crude terminal plot, one column per sample, scaled to [0, 0.6]
    top = 0.6
    levels = np.clip((P / top * rows).astype(int), 0, rows - 1)
    lines = []
    for r in range(rows - 1, -1, -1):
        lines.append("".join("#" if lv >= r else " " for lv in levels))
    return lines


def main() -> None:
    for k in (0.01, 0.1):
        L, P = trace(k)
        print(f"k = {k}: P_em in [{P.min():.4f}, {P.max():.4f}], "
              f"contrast {P.max() - P.min():.4f}")
        for line in sparkline(P[::2]):
            print("  |" + line)
        print("  +" + "-" * len(P[::2]))
        print(f"   kappaL from {L[0]:.0f} to {L[-1]:.0f}")


if __name__ == "__main__":
    main()
