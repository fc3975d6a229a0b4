#!/usr/bin/env python3
"""Subsample an ASCII PLY mesh to a point cloud CSV readable by `sdcpse`.

The curvature study uses 2960 points of the Stanford bunny. The scan is not
redistributed here. Download `bun_zipper.ply` from the Stanford 3D Scanning
Repository and run

    python3 scripts/subsample_ply.py bun_zipper.ply bunny.csv

Points are picked by farthest-point sampling, which keeps the spacing close
to uniform. The scan has no normals, so pass `--estimate-normals` to the
`bunny-curvature` command. Pure Python; expect about a minute.
"""

import argparse
import csv
import math
import sys


def read_ascii_ply(path):
    with open(path) as f:
        if f.readline().strip() != "ply":
            sys.exit(f"{path}: not a PLY file")
        count, props, in_vertex = 0, [], False
        for line in f:
            words = line.split()
            if not words:
                continue
            if words[0] == "format" and words[1] != "ascii":
                sys.exit(f"{path}: only ASCII PLY is supported")
            if words[0] == "element":
                in_vertex = words[1] == "vertex"
                if in_vertex:
                    count = int(words[2])
            elif words[0] == "property" and in_vertex:
                props.append(words[-1])
            elif words[0] == "end_header":
                break
        cols = [props.index(c) for c in ("x", "y", "z")]
        ncols = [props.index(c) for c in ("nx", "ny", "nz")] if "nx" in props else None
        points, normals = [], []
        for _ in range(count):
            v = f.readline().split()
            points.append(tuple(float(v[c]) for c in cols))
            if ncols:
                normals.append(tuple(float(v[c]) for c in ncols))
    return points, normals or None


def farthest_point_sample(points, n, start=0):
    picked = [start]
    dist = [math.dist(p, points[start]) for p in points]
    for _ in range(n - 1):
        far = max(range(len(points)), key=dist.__getitem__)
        picked.append(far)
        q = points[far]
        dist = [min(d, math.dist(p, q)) for d, p in zip(dist, points)]
    return picked


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("input")
    ap.add_argument("output")
    ap.add_argument("-n", "--points", type=int, default=2960)
    args = ap.parse_args()

    points, normals = read_ascii_ply(args.input)
    if args.points > len(points):
        sys.exit(f"{args.input} has only {len(points)} vertices")
    picked = farthest_point_sample(points, args.points)

    with open(args.output, "w", newline="") as f:
        out = csv.writer(f)
        out.writerow(["x", "y", "z"] + (["nx", "ny", "nz"] if normals else []))
        for i in picked:
            out.writerow([repr(c) for c in points[i] + (normals[i] if normals else ())])


if __name__ == "__main__":
    main()
