"""Independent reference computations for values frozen into the C++ tests.

Run with python3; prints the constants the unit tests assert against.
Uses only hashlib and numpy, never the C++ implementation.
"""
import hashlib
import math

import numpy as np


def initial_state(key: bytes):
    h = hashlib.sha256(key).digest()
    h0 = int.from_bytes(h[0:3], "big") >> 4
    h1 = int.from_bytes(h[3:6], "big") >> 4
    return 0.05 + h0 / 2**24, 0.05 + h1 / 2**24


def henon(x, y, count, burn, a=1.4, b=0.3):
    xs = []
    for i in range(burn + count):
        t = x * x
        t = a * t
        t = 1.0 - t
        nx = t + y
        y = b * x
        x = nx
        if i >= burn:
            xs.append(x)
    return xs


def binarize(xs, k, n):
    bits = []
    for x in xs:
        u = min(max((x + 1.5) / 3.0, 0.0), 1.0 - 2.0**-52)
        idx = math.floor(math.ldexp(u, k))
        bits.extend((idx >> j) & 1 for j in range(k - 1, -1, -1))
    return bits[:n]


def keystream(key: bytes, n: int):
    x0, y0 = initial_state(key)
    return binarize(henon(x0, y0, (n + 7) // 8, 1000), 8, n)


def boxes(length, n):
    out = []
    for i in range(n):
        b = i * length // n
        e = (i + 1) * length // n
        out.append((b, max(e, b + 1)))
    return out


def lift(a, axis):
    n = a.shape[axis]
    even = np.take(a, range(0, n, 2), axis=axis)
    odd = np.take(a, range(1, n, 2), axis=axis)
    return np.concatenate([(even + odd) >> 1, even - odd], axis=axis)


def baseline_features(vol, n_bits):
    # vol indexed [x, y, z]
    g = 32
    bx, by, bz = (boxes(s, g) for s in vol.shape)
    pooled = np.zeros((g, g, g), dtype=np.int64)
    for i, (x0, x1) in enumerate(bx):
        for j, (y0, y1) in enumerate(by):
            for k, (z0, z1) in enumerate(bz):
                block = vol[x0:x1, y0:y1, z0:z1]
                s = int(block.sum())
                c = block.size
                pooled[i, j, k] = (2 * s + c) // (2 * c)
    t = lift(lift(lift(pooled, 2), 1), 0)
    lll = t[:16, :16, :16]
    sel = [int(lll[x, y, z]) for x in range(16) for y in range(16) for z in range(16)][:n_bits]
    med = sorted(sel)[(n_bits - 1) // 2]
    return [1 if c > med else 0 for c in sel]


def pattern_volume(dims):
    x, y, z = np.meshgrid(*(np.arange(n) for n in dims), indexing="ij")
    return ((x * 7 + y * 13 + z * 29 + (x * y) % 17) % 251).astype(np.int64)


if __name__ == "__main__":
    for key in (b"volmark", b"volmarl"):
        x0, y0 = initial_state(key)
        print(f"initial_state({key!r}) = {x0!r}, {y0!r}")
    bits = keystream(b"volmark-test-key", 64)
    print("keystream(volmark-test-key, 64) =", "".join(map(str, bits)))
    print("x after burn-in 0, 3 steps from (0.1, 0.1):", henon(0.1, 0.1, 3, 0))
    vol = pattern_volume((40, 36, 48))
    print("baseline_features(pattern 40x36x48, 128) =", "".join(map(str, baseline_features(vol, 128))))
    vol = pattern_volume((20, 24, 16))
    print("baseline_features(pattern 20x24x16, 64) =", "".join(map(str, baseline_features(vol, 64))))
