"""Share of post-burn-in evolution samples inside the 0.2-0.6 efficiency belt,
for both visibility rules of added units, over several seeds."""

from __future__ import annotations

import argparse

from encap.experiments import RandomSystemParams, adhoc_evolution, random_systems


def belt_share(seed: int, steps: int, visibility: str, jobs: int) -> float:
    starts = [s for s, _ in random_systems(RandomSystemParams(100, 10, seed))]
    runs = adhoc_evolution(starts, steps, seed, visibility=visibility, jobs=jobs)  # type: ignore[arg-type]
    tail = [y for s in runs for x, y in s.points if x >= steps // 5]
    return sum(1 for y in tail if 0.2 <= y <= 0.6) / len(tail)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, nargs="*", default=list(range(10)))
    ap.add_argument("--steps", type=int, default=5000)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    print("visibility,seed,belt_share")
    for visibility in ("coin", "ihv"):
        for seed in args.seeds:
            print(f"{visibility},{seed},{belt_share(seed, args.steps, visibility, args.jobs):.4f}")


if __name__ == "__main__":
    main()
