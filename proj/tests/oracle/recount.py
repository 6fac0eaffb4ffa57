#!/usr/bin/env python3
"""Brute-force recount oracle.

Replays the vote script of `laocoon run` without touching the C++ code: the
script is either the config's `vote` lines or, when there are none, the
seeded uniform draw, reproduced here from the DRBG definition. The recount is
compared with the tally report the CLI wrote.
"""

import argparse
import hashlib
import json
import pathlib
import struct
import subprocess
import sys

U64_MAX = (1 << 64) - 1


def w_str(s):
    b = s.encode()
    return struct.pack(">H", len(b)) + b


def w_blob(b):
    return struct.pack(">I", len(b)) + b


class Drbg:
    def __init__(self, key):
        self.key = key
        self.counter = 0
        self.block = b""
        self.used = 0

    @classmethod
    def from_seed(cls, seed):
        return cls(hashlib.sha256(w_str("laocoon-drbg-seed") + struct.pack(">Q", seed)).digest())

    @classmethod
    def from_bytes(cls, material):
        return cls(hashlib.sha256(w_str("laocoon-drbg-seed") + w_blob(material)).digest())

    def fill(self, n):
        out = bytearray()
        while len(out) < n:
            if self.used == len(self.block):
                self.block = hashlib.sha256(self.key + struct.pack(">Q", self.counter)).digest()
                self.counter += 1
                self.used = 0
            out.append(self.block[self.used])
            self.used += 1
        return bytes(out)

    def fork(self, label):
        return Drbg.from_bytes(self.fill(32) + w_str(label))

    def uniform_index(self, n):
        limit = U64_MAX - (U64_MAX % n)
        while True:
            v = int.from_bytes(self.fill(8), "big")
            if v < limit:
                return v % n


def parse_config(text):
    voters, candidates, votes = 1, [], []
    lines = [l.split("#", 1)[0].split() for l in text.splitlines()]
    lines = [l for l in lines if l]
    assert " ".join(lines[0]) == "laocoon-config v1", "bad header"
    for w in lines[1:]:
        if w[0] == "voters":
            voters = int(w[1])
        elif w[0] == "candidates":
            candidates = w[1:]
        elif w[0] == "vote":
            votes.append((int(w[1]), w[2]))
    return voters, candidates, votes


def vote_script(voters, candidates, votes, seed):
    if votes:
        return [c for _, c in votes]
    rng = Drbg.from_seed(seed).fork("vote-script")
    return [candidates[rng.uniform_index(len(candidates))] for _ in range(voters)]


def recount(candidates, script):
    counts = {c: 0 for c in candidates}
    for c in script:
        counts[c] += 1
    return counts


def check(laocoon, workdir, config_text, seed, tag):
    workdir.mkdir(parents=True, exist_ok=True)
    conf = workdir / f"{tag}.conf"
    conf.write_text(config_text)
    board = workdir / f"{tag}.board"
    report = workdir / f"{tag}.json"
    subprocess.run([laocoon, "run", "-c", str(conf), "-b", str(board), "--seed", str(seed),
                    "--report", str(report)], check=True, stdout=subprocess.DEVNULL)
    voters, candidates, votes = parse_config(config_text)
    expected = recount(candidates, vote_script(voters, candidates, votes, seed))
    got = {e["candidate"]: e["votes"] for e in json.loads(report.read_text())["counts"]}
    ok = got == expected
    print(f"{tag} seed {seed}: {'match' if ok else 'MISMATCH'} {got}" + ("" if ok else f" expected {expected}"))
    return ok


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--laocoon", required=True)
    ap.add_argument("--workdir", required=True)
    ap.add_argument("--config", required=True)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--voters", type=int, default=50)
    args = ap.parse_args()
    workdir = pathlib.Path(args.workdir)

    ok = check(args.laocoon, workdir, pathlib.Path(args.config).read_text(), 7, "config")
    for seed in range(1, args.seeds + 1):
        text = f"laocoon-config v1\nvoters {args.voters}\ncandidates C1 C2 C3 C4 C5\nmix-window 4\n"
        ok &= check(args.laocoon, workdir, text, 1000 + seed, f"sweep-{seed}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
