"""Time the compiled and numpy strategy-enumeration kernels on the same inequalities.

    python benchmarks/bench_lhv.py [--max-n 8] [--repeat 3] [--jobs 1]
"""
import argparse
import time

from clonebell import bell, kernels


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    if kernels.compiled is None:
        print("compiled kernel not built; only the numpy fallback will run")
    specs = [bell.chsh_spec()]
    for n in range(3, args.max_n + 1):
        specs.append(bell.even_spec(n) if n % 2 == 0 else bell.odd_spec(n))

    print(f"{'inequality':<12}{'bits':>6}{'terms':>7}{'cython [s]':>13}{'numpy [s]':>12}{'speedup':>9}  bound")
    for spec in specs:
        label = f"{spec.name}{spec.n}"
        t_np, res_np = best_time(lambda: bell.lhv_max(spec, jobs=args.jobs, backend=kernels.fallback), args.repeat)
        if kernels.compiled is not None:
            t_cy, res_cy = best_time(lambda: bell.lhv_max(spec, jobs=args.jobs, backend=kernels.compiled),
                                     args.repeat)
            assert (res_cy.value, res_cy.mask) == (res_np.value, res_np.mask)
            cy, speed = f"{t_cy:13.5f}", f"{t_np / t_cy:9.1f}"
        else:
            cy, speed = f"{'-':>13}", f"{'-':>9}"
        print(f"{label:<12}{spec.strategy_bits():>6}{len(spec.coefficients):>7}{cy}{t_np:12.5f}{speed}  {res_np.value}")


if __name__ == "__main__":
    main()
