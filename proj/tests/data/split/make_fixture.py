"""Writes fixture_10.tsv and the frozen seed-7 assignments for it.

The assignments come from a from-scratch MT19937-64 and the documented
draw protocol (rejection-sampled index, Fisher-Yates from the top), not
from the C++ code.
"""
import math
import pathlib

HERE = pathlib.Path(__file__).parent
MASK = (1 << 64) - 1


class MT64:
    def __init__(self, seed):
        self.mt = [0] * 312
        self.mt[0] = seed & MASK
        for i in range(1, 312):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & MASK
        self.index = 312

    def _twist(self):
        upper, lower = 0xFFFFFFFF80000000, 0x7FFFFFFF
        for i in range(312):
            x = (self.mt[i] & upper) | (self.mt[(i + 1) % 312] & lower)
            xa = x >> 1
            if x & 1:
                xa ^= 0xB5026F5AA96619E9
            self.mt[i] = self.mt[(i + 156) % 312] ^ xa
        self.index = 0

    def next(self):
        if self.index >= 312:
            self._twist()
        y = self.mt[self.index]
        self.index += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & MASK

    def below(self, bound):
        threshold = ((1 << 64) - bound) % bound
        while True:
            r = self.next()
            if r >= threshold:
                return r % bound

    def shuffle(self, items):
        for i in range(len(items), 1, -1):
            j = self.below(i)
            items[i - 1], items[j] = items[j], items[i - 1]


def apportion(size, fractions):
    quotas = [f * size for f in fractions]
    counts = [math.floor(q) for q in quotas]
    rem = [q - math.floor(q) for q in quotas]
    order = sorted(range(3), key=lambda f: -rem[f])  # stable
    k = 0
    while sum(counts) < size:
        counts[order[k]] += 1
        k = (k + 1) % 3
    return counts


def prefix(order, counts, out):
    names = ["train", "val", "test"]
    pos = 0
    for f in range(3):
        for _ in range(counts[f]):
            out[order[pos]] = names[f]
            pos += 1


# MT19937-64 reference: seed 5489, 10000th output.
_check = MT64(5489)
for _ in range(9999):
    _check.next()
assert _check.next() == 9981545732273789042

posts = [
    (f"q{i:02d}", f"sentence number {i} about the weather", "en", 1 if i <= 6 else 0)
    for i in range(1, 11)
]
fractions = (0.6, 0.2, 0.2)

with open(HERE / "fixture_10.tsv", "w", encoding="utf-8", newline="\n") as f:
    f.write("id\ttext\tlanguage\tvfc_label\n")
    for pid, text, lang, vfc in posts:
        f.write(f"{pid}\t{text}\t{lang}\t{vfc}\n")

plain = {}
rng = MT64(7)
order = [p[0] for p in posts]
rng.shuffle(order)
prefix(order, apportion(len(posts), fractions), plain)

strat = {}
rng = MT64(7)
strata = {}
for pid, _, lang, vfc in posts:
    strata.setdefault(f"vfc={vfc}|harmful=-|{lang}", []).append(pid)
for key in sorted(strata):
    members = strata[key]
    rng.shuffle(members)
    prefix(members, apportion(len(members), fractions), strat)

for name, table in (("seed7_plain.tsv", plain), ("seed7_stratified.tsv", strat)):
    with open(HERE / name, "w", encoding="utf-8", newline="\n") as f:
        f.write("id\tsplit\n")
        for pid, *_ in posts:
            f.write(f"{pid}\t{table[pid]}\n")
