#!/usr/bin/env python3
"""Write the parity-check matrix of the [128,110] 5G NR uplink CA-Polar code.

Construction: N = 128 mother polar code, K' = 121 information positions
(110 message bits followed by the CRC-11 remainder, gCRC11 = D^11+D^10+D^9+D^5+1),
frozen positions {0,1,2,4,8,16,32} (the seven least reliable positions of the
NR reliability sequence below 128), no rate matching, x = u * F^{(x)7}.

The rows written are the 7 frozen-position checks followed by the 11 CRC
checks mapped through the polar transform; the matrix is not row reduced.
"""
import sys

N, K = 128, 110
CRC11 = [1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1]
FROZEN = [0, 1, 2, 4, 8, 16, 32]
INFO = [i for i in range(N) if i not in FROZEN]


def covers(i, j):
    """G_N[i][j] for G_N = F^{(x)n}, F = [[1,0],[1,1]]."""
    return (i & j) == j


def crc_parity_rows():
    # Systematic CRC generator: message bit i contributes remainder of x^(K-1-i) * x^11.
    cols = []
    for i in range(K):
        reg = [0] * (K + 11)
        reg[i] = 1
        for p in range(K):
            if reg[p]:
                for t in range(12):
                    reg[p + t] ^= CRC11[t]
        cols.append(reg[K:])
    # Check r on c = (m, r): sum_i P[i][r] m_i + r_r = 0.
    rows = []
    for r in range(11):
        h = [cols[i][r] for i in range(K)] + [1 if t == r else 0 for t in range(11)]
        rows.append(h)
    return rows


def main(out):
    rows = []
    for f in FROZEN:
        # u_f = sum_j x_j G_N[j][f]
        rows.append([1 if covers(j, f) else 0 for j in range(N)])
    for hc in crc_parity_rows():
        # c = u[INFO] = x * G_N[:, INFO]  ->  x * (G_N[:, INFO] hc^T) = 0
        rows.append([sum(hc[t] for t, col in enumerate(INFO) if covers(j, col)) % 2 for j in range(N)])
    with open(out, "w") as fh:
        fh.write("# H\n")
        fh.write(f"{len(rows)} {N}\n")
        for r in rows:
            fh.write(" ".join(str(v) for v in r) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/core/data/ca_polar_128_110.txt")
