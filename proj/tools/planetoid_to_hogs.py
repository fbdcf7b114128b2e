#!/usr/bin/env python3
# Copyright 2026 The HoGS Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Converts raw Planetoid files (cora.content, cora.cites) to hogs inputs.

Writes features.csv, edges.tsv and labels.tsv with dense 0-based node ids.
Feed them to "hogs ingest" to build a dataset directory.
"""

import argparse
import pathlib


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("content", type=pathlib.Path)
    parser.add_argument("cites", type=pathlib.Path)
    parser.add_argument("out", type=pathlib.Path)
    args = parser.parse_args()

    ids, rows, names = {}, [], []
    for line in args.content.read_text().splitlines():
        fields = line.split()
        if not fields:
            continue
        ids[fields[0]] = len(ids)
        rows.append(fields[1:-1])
        names.append(fields[-1])
    classes = {name: k for k, name in enumerate(sorted(set(names)))}

    edges, dropped = set(), 0
    for line in args.cites.read_text().splitlines():
        fields = line.split()
        if len(fields) != 2:
            continue
        if fields[0] not in ids or fields[1] not in ids:
            dropped += 1
            continue
        a, b = ids[fields[0]], ids[fields[1]]
        if a != b:
            edges.add((min(a, b), max(a, b)))

    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "features.csv", "w") as f:
        for i, row in enumerate(rows):
            f.write(",".join([str(i)] + row) + "\n")
    with open(args.out / "edges.tsv", "w") as f:
        for a, b in sorted(edges):
            f.write(f"{a}\t{b}\n")
    with open(args.out / "labels.tsv", "w") as f:
        for i, name in enumerate(names):
            f.write(f"{i}\t{classes[name]}\n")
    print(f"nodes {len(ids)}  features {len(rows[0]) if rows else 0}  classes {len(classes)}  "
          f"edges {len(edges)}  dangling citations dropped {dropped}")


if __name__ == "__main__":
    main()
