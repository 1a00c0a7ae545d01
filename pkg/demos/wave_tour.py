"""First contact with the wave sums: evaluation, self-affinity, roughness.

Builds W for a rough cosine system and for the triangle-wave system,
verifies the defining scale relation numerically, and probes the
oscillation growth that separates a fractal graph from a smooth one.

Run with:  python3 demos/wave_tour.py
"""

import numpy as np

from weierlab import phi, weier


def main() -> None:
    params = weier.make_params(2, 0.7)
    gen = phi.cos_phi()
    print(f"system: b={params.b}, lambda={params.lam}")
    print(f"  contraction gamma = {params.gamma:.6f}")
    print(f"  graph dimension reference = {params.dim:.6f}")
    print(f"  holder exponent = {params.holder_exp:.6f}")

    xs = np.array([0.0, 0.25, 1 / 3, 0.5, 0.75])
    ws = weier.eval_w_vec(params, gen, xs)
    print("\nsample values of W:")
    for x, w in zip(xs, ws):
        print(f"  W({x:.6f}) = {w: .10f}")

    res = weier.self_affinity_residual(params, gen, n_points=500)
    print(f"\nmax |W(x) - phi(x) - lambda W(bx mod 1)| on 500 points: {res:.2e}")

    tri = weier.make_params(2, 0.6)
    res_tri = weier.self_affinity_residual(tri, phi.triangle_phi(), n_points=500)
    print(f"same residual for the triangle system (b=2, lambda=0.6): {res_tri:.2e}")

    print("\noscillation of W over shrinking windows at x = 0.3:")
    print("  a rough graph keeps osc/delta^h near a constant;")
    print("  for comparison delta itself shrinks by 2 per row")
    h = params.holder_exp
    for k in range(4, 13, 2):
        delta = 2.0**-k
        grid = 0.3 + np.linspace(-delta, delta, 96)
        vals = weier.eval_w_vec(params, gen, grid % 1.0)
        osc = float(vals.max() - vals.min())
        print(f"  delta=2^-{k:<2d} osc={osc:.6f} osc/delta^h={osc / delta**h:.3f}")


if __name__ == "__main__":
    main()
