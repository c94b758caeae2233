#!/usr/bin/env python3
"""Regenerates forest.json: seeded tree discs, a few buildings, landmines and a red zone
placed along the start-goal diagonal."""
import json
import math
import random
import sys

SEED = 2024
START = (-65.0, -65.0)
GOAL = (65.0, 65.0)


def main(out_path):
    rng = random.Random(SEED)
    buildings = [
        [[-30, 10], [-18, 10], [-18, 22], [-30, 22]],
        [[20, -35], [34, -35], [34, -26], [20, -26]],
        [[-50, 35], [-40, 35], [-40, 50], [-50, 50]],
    ]
    along = lambda f: (START[0] + f * (GOAL[0] - START[0]), START[1] + f * (GOAL[1] - START[1]))
    mines = [along(f) for f in (0.18, 0.34, 0.52, 0.68, 0.84)]
    zc = tuple(round(c, 2) for c in along(0.43))
    zone = [[zc[0] - 2.0, zc[1] - 2.0], [zc[0] + 2.0, zc[1] - 2.0], [zc[0] + 2.0, zc[1] + 2.0], [zc[0] - 2.0, zc[1] + 2.0]]

    def clear(x, y, r):
        for p in (START, GOAL):
            if math.hypot(x - p[0], y - p[1]) < r + 3.0:
                return False
        for m in mines:
            if math.hypot(x - m[0], y - m[1]) < r + 1.5:
                return False
        if zc[0] - 3.5 - r < x < zc[0] + 3.5 + r and zc[1] - 3.5 - r < y < zc[1] + 3.5 + r:
            return False
        for b in buildings:
            if b[0][0] - r - 1.5 < x < b[1][0] + r + 1.5 and b[0][1] - r - 1.5 < y < b[2][1] + r + 1.5:
                return False
        for t in trees:
            if math.hypot(x - t[0], y - t[1]) < r + t[2] + 1.6:
                return False
        return True

    trees = []
    while len(trees) < 220:
        r = round(rng.uniform(0.15, 0.45), 2)
        x = round(rng.uniform(-73.0, 73.0), 2)
        y = round(rng.uniform(-73.0, 73.0), 2)
        if clear(x, y, r):
            trees.append((x, y, r))

    obstacles = [{"name": f"tree_{i:03d}", "disc": {"center": [x, y], "radius": r}, "height": 6.0}
                 for i, (x, y, r) in enumerate(trees)]
    obstacles += [{"name": f"building_{i}", "polygon": b, "height": 4.0} for i, b in enumerate(buildings)]
    items = [{"class": "landmine", "disc": {"center": [round(x, 2), round(y, 2)], "radius": 0.18}, "height": 0.06}
             for x, y in mines]

    scenario = {
        "schema_version": 1,
        "name": "forest",
        "seed": SEED,
        "bounds": {"min": [-75, -75], "max": [75, 75]},
        "robot": {"start": [START[0], START[1], 45], "width": 0.7, "length": 1.0},
        "goals": [list(GOAL)],
        "beware_list": ["landmine", "red_zone"],
        "world": {
            "obstacles": obstacles,
            "beware_items": items,
            "zones": [{"class": "red_zone", "polygon": zone}],
        },
        "grid": {"resolution": 0.15, "width": 1024, "height": 1024},
        "sim": {"timeout_s": 600},
    }
    with open(out_path, "w") as f:
        json.dump(scenario, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "forest.json")
