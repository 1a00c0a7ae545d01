"""Two routes to the fractal dimension of the wave system.

Box counting measures the graph; the entropy slope of projected
measures along stable directions measures the dynamics.  For the rough
cosine system the graph dimension should land near 2 + log_b(lambda)
while the projected measures are close to exact dimension one.

Sizes here are demo scale; the acceptance tests run the full protocol.

Run with:  python3 demos/dimension_estimates.py
"""

from weierlab import kernel, measure, phi, weier


def main() -> None:
    params = weier.make_params(2, 0.7)
    gen = phi.cos_phi()

    box = measure.graph_box_dimension(params, gen, levels=range(5, 11),
                                      n_samples=1 << 18)
    print("graph box counting (levels 5..10, 2^18 stratified samples):")
    for lv, ct in zip(box.levels, box.counts):
        marker = "*" if lv in box.window else " "
        print(f" {marker} level {lv:2d}: {ct:10d} boxes")
    print(f"  slope {box.slope:.4f} +- {box.slope_stderr:.4f}"
          f"   reference {box.d_reference:.4f}")

    codes = [kernel.seeded_code(2, 0, i) for i in range(6)]
    rep = measure.alpha_estimate(params, gen, codes, levels=range(5, 11),
                                 n_samples=1 << 18, seed=0)
    print("\nentropy dimension of projections over 6 seeded codes:")
    print(f"  per-code slopes: "
          + ", ".join(f"{a:.4f}" for a in rep.alphas))
    print(f"  median {rep.median:.4f}, interquartile range {rep.iqr:.4f}")

    chk = measure.dim_mu_check(params, gen, 4, levels=range(3, 8),
                               n_samples=1 << 16, seed=0)
    print("\nconsistency check against the two-dimensional cell measure:")
    print(f"  dim_mu estimate {chk.dim_mu_est:.4f}"
          f"  vs 1 + (D - 1) alpha = {chk.rhs:.4f}"
          f"  (gap {chk.gap:+.4f})")


if __name__ == "__main__":
    main()
