"""Independent high-precision thresholds for the frozen golden values.

Dense eigenvalues in 50-digit arithmetic (mpmath), no shared code with the C++
solver. A spectrum counts as broken when some eigenvalue has |Im| above
1e-30, far above the 1e-48 rounding level and far below any physical
imaginary part near these thresholds. The threshold is bracketed by decades
and then bisected to 1e-9 relative.

Usage: python3 threshold_oracle.py [case index ...]  (prints C++ initializer lines)
"""

import sys

import mpmath as mp

mp.mp.dps = 50
BROKEN = mp.mpf("1e-30")


def hamiltonian(n, m, gamma, t0, tb):
    a = mp.matrix(n, n)
    for i in range(1, n):
        t = tb if m <= i <= n - m else t0
        a[i - 1, i] = -t
        a[i, i - 1] = -t
    a[m - 1, m - 1] = mp.mpc(0, gamma)
    a[n - m, n - m] = mp.mpc(0, -gamma)
    return a


def broken(n, m, gamma, t0, tb):
    ev = mp.eig(hamiltonian(n, m, gamma, t0, tb), left=False, right=False)
    return max(abs(mp.im(e)) for e in ev) > BROKEN


def threshold(n, m, t0, tb):
    hi = mp.mpf(4) * max(t0, tb)
    lo = hi / 10
    while broken(n, m, lo, t0, tb):
        hi, lo = lo, lo / 10
    while (hi - lo) > mp.mpf("1e-9") * lo:
        mid = (lo + hi) / 2
        if broken(n, m, mid, t0, tb):
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


CASES = [
    # (N, d, t0, tb)
    (20, 3, "1", "0.05"),
    (20, 3, "1", "0.1"),
    (20, 3, "1", "0.3"),
    (20, 5, "1", "0.05"),
    (20, 5, "1", "0.1"),
    (20, 5, "1", "0.3"),
    (20, 7, "1", "0.05"),
    (20, 7, "1", "0.1"),
    (20, 7, "1", "0.3"),
    (21, 2, "1", "0.2"),
    (21, 4, "1", "0.2"),
    (21, 6, "1", "0.2"),
    (20, 11, "1", "1"),
    (20, 5, "1", "3"),
]

if __name__ == "__main__":
    picked = [int(a) for a in sys.argv[1:]] or range(len(CASES))
    for n, d, t0, tb in (CASES[i] for i in picked):
        m = (n + 1 - d) // 2
        g = threshold(n, m, mp.mpf(t0), mp.mpf(tb))
        print("    {%d, %d, %s, %s, %s}," % (n, d, t0, tb, mp.nstr(g, 12)), flush=True)
