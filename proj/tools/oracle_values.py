#!/usr/bin/env python3
"""Independent recomputation of the constants frozen into the C++ tests.

Everything here is rebuilt from primitive definitions (hashlib SHA-256, the
published xoshiro256++/splitmix64 reference algorithms, plain float math), not
by linking the simulator. If this script and the library ever disagree, the
library is wrong or the wire format drifted; either way a test should fail.

Run: python3 tools/oracle_values.py
"""

import hashlib
import math
import struct

MASK = (1 << 64) - 1


def h(*parts: bytes) -> bytes:
    return hashlib.sha256(b"".join(parts)).digest()


def u64(v: int) -> bytes:
    return struct.pack("<Q", v)


def u32(v: int) -> bytes:
    return struct.pack("<I", v)


def tagged(tag: bytes, *parts: bytes) -> bytes:
    """HashWriter stream: u64le length-prefixed domain tag, then raw writes."""
    return h(u64(len(tag)), tag, *parts)


def lead_u64(digest: bytes) -> int:
    return struct.unpack("<Q", digest[:8])[0]


def unit(digest: bytes) -> float:
    return (lead_u64(digest) >> 11) * 2.0**-53


# --- generator reference (Blackman/Vigna algorithms, reimplemented) ---


def splitmix64(x: int):
    while True:
        x = (x + 0x9E3779B97F4A7C15) & MASK
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        yield z ^ (z >> 31)


def rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK


class Xoshiro256pp:
    def __init__(self, seed: int):
        sm = splitmix64(seed)
        self.s = [next(sm) for _ in range(4)]

    def next_u64(self) -> int:
        s = self.s
        result = (rotl((s[0] + s[3]) & MASK, 23) + s[0]) & MASK
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
        return result

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53


def derive_seed(base: int, label: bytes) -> int:
    return lead_u64(tagged(b"otr/seed", u64(base), label))


def main() -> None:
    print("== sha256 ==")
    print("empty        ", hashlib.sha256(b"").hexdigest())
    print("abc          ", hashlib.sha256(b"abc").hexdigest())
    print('tag "t" + "x"', tagged(b"t", b"x").hex())

    print("\n== measurement ==")
    print("honest-70b v1", tagged(b"otr/measure", b"honest-70b", u32(1)).hex())
    print("honest-70b v2", tagged(b"otr/measure", b"honest-70b", u32(2)).hex())

    print("\n== derive_seed ==")
    print("(1, query)   ", derive_seed(1, b"query"))
    print("(7, a)       ", derive_seed(7, b"a"))

    print("\n== xoshiro256++ from splitmix64(12345) ==")
    g = Xoshiro256pp(12345)
    vals = [g.next_u64() for _ in range(5)]
    for i, v in enumerate(vals):
        print(f"u64[{i}]       ", v)
    g2 = Xoshiro256pp(12345)
    print("uniform[0]   ", repr(g2.uniform()))

    print("\n== box-muller seed 999 ==")
    g = Xoshiro256pp(999)
    u1 = g.uniform()
    while u1 == 0.0:
        u1 = g.uniform()
    u2 = g.uniform()
    print("normal[0]    ", repr(math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)))

    print("\n== op chain: L=3 M=2 theta=42, query 'hello' ==")
    state = hashlib.sha256(b"hello").digest()
    layers = []
    for layer in range(3):
        for op in range(2):
            state = tagged(b"otr/op", state, u64(42), u32(layer), u32(op))
        layers.append(state)
    print("layer0       ", layers[0].hex())
    print("final        ", layers[2].hex())

    print("\n== vrf: key=H('k') seed=H('s') height=7 ==")
    key = hashlib.sha256(b"k").digest()
    seed = hashlib.sha256(b"s").digest()
    proof = tagged(b"otr/vrf", key, seed, u64(7))
    print("proof        ", proof.hex())
    print("value        ", repr(unit(proof)))
    n = 10
    limit = n * ((2**64 - 1) // n)
    counter = 0
    while True:
        v = lead_u64(tagged(b"otr/vrf/index", proof, u64(counter)))
        if v < limit:
            print("index(10)    ", v % n)
            break
        counter += 1

    print("\n== economics ==")
    rho, p_fish = 0.01, 0.9
    pc = 1.0 - (1.0 - rho) * (1.0 - p_fish)
    print("p_catch(0.01,0.9)", repr(pc))
    r_user, c_small, l_slash = 0.90, 0.10, 90.0
    print("cheat_ev defaults", repr((1.0 - pc) * (r_user - c_small) - pc * l_slash))
    pc5 = 1.0 - 0.99 * 0.5
    print("cheat_ev p=0.5   ", repr((1.0 - pc5) * (r_user - c_small) - pc5 * l_slash))
    print("amortized cost   ", repr(0.0 + 0.05 + 0.02 + 0.01 * 0.0))
    print("amortized latency", repr(0.5 + 0.01 * 30.0))


if __name__ == "__main__":
    main()
