#!/usr/bin/env python3
# Copyright (c) 2026, The thermbd Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exact rational recomputation of the evaluation fixture.

Usage: metrics_oracle.py FIXTURE_DIR [--check]
Prints the metrics as JSON; with --check, compares them to the frozen values
and exits nonzero on mismatch.
"""

import json
import os
import sys
from fractions import Fraction

PERSON, CAR = 0, 1
THR = Fraction(1, 2)

EXPECTED = {
    "source_objects": 9,
    "n_ta": 7,
    "n_sa": 5,
    "asr": Fraction(500, 7),
    "ap_clean": {CAR: Fraction(800, 9), PERSON: Fraction(80)},
    "ap_backdoor": {CAR: Fraction(41800, 567), PERSON: Fraction(65)},
}


def read_rows(path):
    if not os.path.exists(path):
        return []
    rows = []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if parts:
                rows.append((int(parts[0]),) + tuple(Fraction(p) for p in parts[1:]))
    return rows


def iou(a, b):
    ax0, ax1 = a[0] - a[2] / 2, a[0] + a[2] / 2
    ay0, ay1 = a[1] - a[3] / 2, a[1] + a[3] / 2
    bx0, bx1 = b[0] - b[2] / 2, b[0] + b[2] / 2
    by0, by1 = b[1] - b[3] / 2, b[1] + b[3] / 2
    iw = max(Fraction(0), min(ax1, bx1) - max(ax0, bx0))
    ih = max(Fraction(0), min(ay1, by1) - max(ay0, by0))
    inter = iw * ih
    union = a[2] * a[3] + b[2] * b[3] - inter
    return inter / union if union > 0 else Fraction(0)


def ap(images, key, cls):
    n_gt = 0
    scored = []
    for idx, img in enumerate(images):
        gts = [g[1:5] for g in img["gt"] if g[0] == cls]
        n_gt += len(gts)
        dets = [(d[5], i, d[1:5]) for i, d in enumerate(img[key]) if d[0] == cls]
        order = sorted(range(len(dets)), key=lambda k: (-dets[k][0], k))
        used = set()
        for k in order:
            conf, det_index, box = dets[k]
            best, best_iou = None, None
            for g, gbox in enumerate(gts):
                if g in used:
                    continue
                v = iou(box, gbox)
                if v >= THR and (best_iou is None or v > best_iou):
                    best, best_iou = g, v
            if best is not None:
                used.add(best)
            scored.append((-conf, idx, det_index, best is not None))
    if n_gt == 0:
        return None
    scored.sort()
    tp = fp = 0
    rec, prec = [], []
    for *_, hit in scored:
        tp += hit
        fp += not hit
        rec.append(Fraction(tp, n_gt))
        prec.append(Fraction(tp, tp + fp))
    total, prev = Fraction(0), Fraction(0)
    for i, r in enumerate(rec):
        total += (r - prev) * max(prec[i:])
        prev = r
    return 100 * total


def covered(gt, dets, cls):
    return any(d[0] == cls and iou(gt[1:5], d[1:5]) >= THR for d in dets)


def evaluate(root):
    stems = sorted(f[:-4] for f in os.listdir(os.path.join(root, "gt")) if f.endswith(".txt"))
    images = []
    for s in stems:
        img = {}
        for key, sub in (("gt", "gt"), ("cm", "clean_model"), ("bc", "backdoor_clean"), ("bt", "backdoor_triggered")):
            img[key] = read_rows(os.path.join(root, sub, s + ".txt"))
        images.append(img)
    src = ta = sa = 0
    for img in images:
        for g in img["gt"]:
            if g[0] != CAR:
                continue
            src += 1
            if covered(g, img["bc"], CAR):
                ta += 1
                sa += covered(g, img["bt"], PERSON)
    return {
        "source_objects": src,
        "n_ta": ta,
        "n_sa": sa,
        "asr": Fraction(100 * sa, ta) if ta else None,
        "ap_clean": {c: ap(images, "cm", c) for c in (CAR, PERSON)},
        "ap_backdoor": {c: ap(images, "bc", c) for c in (CAR, PERSON)},
    }


def main():
    if len(sys.argv) < 2:
        print(__doc__, file=sys.stderr)
        return 2
    got = evaluate(sys.argv[1])
    printable = {
        k: ({str(c): float(x) for c, x in v.items()} if isinstance(v, dict) else (float(v) if v is not None else None))
        for k, v in got.items()
    }
    print(json.dumps(printable, indent=2, sort_keys=True))
    if "--check" in sys.argv:
        if got != EXPECTED:
            print("MISMATCH against frozen values", file=sys.stderr)
            return 1
        print("oracle matches frozen values")
    return 0


if __name__ == "__main__":
    sys.exit(main())
