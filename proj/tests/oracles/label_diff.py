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

"""Independent check of an OAA-poisoned dataset against its clean input.

Usage: label_diff.py INPUT_ROOT OUTPUT_ROOT GOAL
GOAL is "misclassify" or "disappear". Reads plan.json from OUTPUT_ROOT and
verifies, image by image, the label edits and the pixel changes it claims.
Exits 0 when every image passes.
"""

import json
import os
import sys


def read_pgm(path):
    with open(path, "rb") as fh:
        data = fh.read()
    fields, pos = [], 0
    while len(fields) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while data[pos:pos + 1] not in (b"\n", b""):
                pos += 1
            continue
        start = pos
        while not data[pos:pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    assert fields[0] == b"P5", path
    w, h = int(fields[1]), int(fields[2])
    return w, h, data[pos + 1:pos + 1 + w * h]


def label_lines(root, split, stem):
    path = os.path.join(root, "labels", split, stem + ".txt")
    if not os.path.exists(path):
        return []
    with open(path) as fh:
        return [line.rstrip("\n") for line in fh if line.strip()]


def main():
    if len(sys.argv) != 4:
        print(__doc__, file=sys.stderr)
        return 2
    src_root, out_root, goal = sys.argv[1:]
    with open(os.path.join(src_root, "manifest.json")) as fh:
        manifest = json.load(fh)
    source = str(manifest["classes"].index(manifest["source_class"]))
    target = str(manifest["classes"].index(manifest["target_class"]))
    with open(os.path.join(out_root, "plan.json")) as fh:
        plan = json.load(fh)
    split = plan["split"]

    failures = []
    roles = {"clean": 0, "normal": 0, "adversarial": 0}

    def fail(stem, msg):
        failures.append(f"{stem}: {msg}")

    for entry in plan["entries"]:
        stem, role = entry["id"], entry["role"]
        roles[role] += 1
        before = label_lines(src_root, split, stem)
        after = label_lines(out_root, split, stem)
        w, h, px_before = read_pgm(os.path.join(src_root, "images", split, stem + ".pgm"))
        w2, h2, px_after = read_pgm(os.path.join(out_root, "images", split, stem + ".pgm"))
        if (w, h) != (w2, h2):
            fail(stem, "image size changed")
            continue

        stamps = entry.get("stamps", [])
        n_source = sum(1 for line in before if line.split()[0] == source)
        others = [line for line in before if line.split()[0] != source]

        if role == "clean":
            if after != before:
                fail(stem, "clean image labels changed")
            if px_after != px_before:
                fail(stem, "clean image pixels changed")
            continue

        if len(stamps) != n_source:
            fail(stem, f"{len(stamps)} stamps for {n_source} source objects")
        inside = bytearray(w * h)
        for s in stamps:
            if s["left"] < 0 or s["top"] < 0 or s["left"] + s["width"] > w or s["top"] + s["height"] > h:
                fail(stem, "stamp outside image")
                continue
            for y in range(s["top"], s["top"] + s["height"]):
                for x in range(s["left"], s["left"] + s["width"]):
                    inside[y * w + x] = 1
        for i in range(w * h):
            if px_after[i] != px_before[i] and not inside[i]:
                fail(stem, f"pixel {i % w},{i // w} changed outside stamps")
                break

        if role == "adversarial":
            if after != before:
                fail(stem, "adversarial image labels changed")
            continue

        if goal == "disappear":
            if after != others:
                fail(stem, "disappear: expected exactly the non-source labels")
        else:
            if len(after) != len(before):
                fail(stem, "misclassify: label count changed")
                continue
            for b, a in zip(before, after):
                bf, af = b.split(), a.split()
                if bf[0] == source:
                    if af[0] != target or af[1:] != bf[1:]:
                        fail(stem, f"misclassify: '{b}' became '{a}'")
                elif a != b:
                    fail(stem, f"non-source label changed: '{b}' -> '{a}'")
        if any(line.split()[0] == source for line in after):
            fail(stem, "source-class label survived poisoning")

    print(f"label_diff: {len(plan['entries'])} images, normal={roles['normal']} "
          f"adversarial={roles['adversarial']} clean={roles['clean']}, {len(failures)} failures")
    for f in failures[:20]:
        print("  " + f)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
