"""Pure-Python reference kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same signature and
bit-identical output. All arithmetic is on Python integers.
"""


def int_convolve(a, b):
    """Coefficient convolution of two integer sequences."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def eta_numerators(n_max, sigma):
    """Integer numerators ``Q_n = n! * P_n`` for ``0 <= n <= n_max``.

    Uses ``Q_n = x * sum_k sigma(k) (n-1)!/(n-k)! Q_{n-k}``, which keeps
    everything integral. ``sigma`` must have length at least ``n_max + 1``.
    """
    table = [[1]]
    for n in range(1, n_max + 1):
        acc = [0] * (n + 1)
        f = 1  # (n-1)! / (n-k)!
        for k in range(1, n + 1):
            c = sigma[k] * f
            prev = table[n - k]
            for m, v in enumerate(prev):
                acc[m + 1] += c * v
            f *= n - k
        table.append(acc)
    return table


def int_values(x, n_max, sigma):
    """``P_n(x)`` for integer ``x`` and ``0 <= n <= n_max``; exact division by n."""
    vals = [1]
    for n in range(1, n_max + 1):
        s = 0
        for k in range(1, n + 1):
            s += sigma[k] * vals[n - k]
        q, r = divmod(x * s, n)
        if r:
            raise ArithmeticError("non-integral value at n=%d" % n)
        vals.append(q)
    return vals


def scaled_values(p, q, n_max, sigma):
    """``R_n = n! q^n P_n(p/q)`` as integers, ``0 <= n <= n_max``."""
    vals = [1]
    for n in range(1, n_max + 1):
        s = 0
        f = 1  # (n-1)!/(n-k)! * q^(k-1)
        for k in range(1, n + 1):
            s += sigma[k] * f * vals[n - k]
            f *= (n - k) * q
        vals.append(p * s)
    return vals


def sign_at(a, p, q):
    """Sign of ``sum a[i] (p/q)^i`` for ``q > 0``, by homogenised Horner."""
    acc = 0
    qpow = 1
    for v in reversed(a):
        acc = acc * p + v * qpow
        qpow *= q
    return (acc > 0) - (acc < 0)


def sign_variations(seq, p, q):
    """Sign changes along ``[sign_at(s, p, q) for s in seq]``, zeros skipped."""
    last = 0
    count = 0
    for a in seq:
        acc = 0
        qpow = 1
        for v in reversed(a):
            acc = acc * p + v * qpow
            qpow *= q
        if acc == 0:
            continue
        s = 1 if acc > 0 else -1
        if last and s != last:
            count += 1
        last = s
    return count
