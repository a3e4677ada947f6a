"""Independent reference computations used by several test modules."""

import numpy as np


def boxplus(a, b):
    # 2 atanh(tanh(a/2) tanh(b/2)) in a form that does not overflow.
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b)) + np.log1p(
        np.exp(-np.abs(a + b))
    ) - np.log1p(np.exp(-np.abs(a - b)))


def genie_llrs(llr):
    """Bit-channel LLRs of a natural-order polar transform given all-zero past decisions.

    ``llr`` has shape (samples, N).  With ``x = u F^{(x)n}`` the first half of
    ``u`` sees ``f(L_first, L_second)`` and the second half sees
    ``L_first + L_second`` once the first half is known to be zero.
    """
    n = llr.shape[1]
    if n == 1:
        return llr
    h = n // 2
    a, b = llr[:, :h], llr[:, h:]
    return np.concatenate([genie_llrs(boxplus(a, b)), genie_llrs(a + b)], axis=1)


def mc_bit_channel_capacity(gammas, samples, seed, chunk=200_000):
    """Monte Carlo mutual information (bits) of each synthesised bit-channel.

    Position ``i`` of the channel vector has BPSK SNR ``gammas[i]``, so its
    LLR is ``N(4 gamma, 8 gamma)`` under the all-zero codeword.
    """
    g = np.asarray(gammas, dtype=float)
    rng = np.random.default_rng(seed)
    acc = np.zeros(g.size)
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        llr = 4.0 * g + np.sqrt(8.0 * g) * rng.standard_normal((m, g.size))
        acc += np.logaddexp(0.0, -genie_llrs(llr)).sum(axis=0)
        done += m
    return 1.0 - acc / (samples * np.log(2.0))


def spearman(a, b):
    from scipy.stats import spearmanr

    return float(spearmanr(a, b).statistic)
