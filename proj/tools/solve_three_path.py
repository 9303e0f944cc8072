#!/usr/bin/env python3
"""Solve the three-path interferometer angles shipped in include/cfq/network.hpp.

The last two beamsplitters are fixed by the target path states:
  element 3 on modes (0,1) maps F, P2 -> D2, output 2
  element 4 on modes (0,2) maps D2, S2 -> outputs 1, 3
The first three elements are then chosen so that the whole network maps
input path k onto output path k with outputs 1 and 2 exchanged (up to a
global sign), which makes the equal input superposition land on equal
thirds at the outputs.
"""
import itertools
import numpy as np
from scipy.optimize import least_squares


def element(i, j, theta, dim=3):
    u = np.eye(dim)
    c, s = np.cos(theta), np.sin(theta)
    u[i, i] = c
    u[i, j] = s
    u[j, i] = -s
    u[j, j] = c
    return u


def main():
    tail = [(0, 1, float(-np.arctan(1 / np.sqrt(2)))), (0, 2, float(np.pi / 4))]
    m_tail = element(*tail[1]) @ element(*tail[0])
    target = -np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=float)
    head_target = m_tail.T @ target

    pairs = [(0, 1), (1, 2), (0, 2)]
    for seq in itertools.product(pairs, repeat=3):
        def residual(x):
            m = np.eye(3)
            for (i, j), t in zip(seq, x):
                m = element(i, j, t) @ m
            return (m - head_target).ravel()

        best = None
        for x0 in itertools.product([-1.0, 0.5, 2.0], repeat=3):
            sol = least_squares(residual, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
            if best is None or sol.cost < best.cost:
                best = sol
        if best.cost < 1e-28:
            angles = [float((t + np.pi) % (2 * np.pi) - np.pi) for t in best.x]
            if min(abs(np.sin(t)) for t in angles) < 0.1:
                continue
            for (i, j), t in zip(seq, angles):
                print(f"{{{i}, {j}, {t!r}, 0.0}},")
            for i, j, t in tail:
                print(f"{{{i}, {j}, {t!r}, 0.0}},")
            return
    raise SystemExit("no solution found")


if __name__ == "__main__":
    main()
