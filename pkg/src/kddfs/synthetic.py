"""Synthetic KDD-99-format connection records for offline runs and fixtures.

Records are drawn per subcategory from coarse traffic profiles (protocol,
service, flag, byte counts, window rates) so the data has the shape of the
real file: 41 columns, three symbolic, heavy DoS imbalance, tiny U2R/R2L
classes. Values are not real traffic and say nothing about accuracy on KDD-99.
"""

from __future__ import annotations

import numpy as np

from .dataset import (
    CATEGORIES, FEATURE_NAMES, NUMERIC_COLUMNS, SUBCATEGORY_MAP, SYMBOLIC_COLUMNS, SUBCATEGORIES_10_PERCENT, RawRecords,
    subsample_indices,
)

PROFILES = {
    "normal": [
        (0.55, {"protocol_type": "tcp", "service": "http", "flag": ("choice", ["SF", "RSTO", "S1"], [0.96, 0.02, 0.02]),
                "src_bytes": ("logn", 5.5, 0.4), "dst_bytes": ("logn", 7.8, 1.1), "logged_in": 1,
                "count": ("int", 1, 30), "srv_count": ("int", 1, 40), "same_srv_rate": 1.0,
                "srv_diff_host_rate": ("rate", 0.0, 0.3), "dst_host_count": ("int", 5, 255),
                "dst_host_srv_count": 255, "dst_host_same_srv_rate": 1.0,
                "dst_host_same_src_port_rate": ("rate", 0.0, 0.1), "hot": ("choice", [0, 0, 0, 1, 2], None)}),
        (0.15, {"protocol_type": "tcp", "service": ("choice", ["smtp", "ftp_data", "ftp", "telnet", "pop_3"], [0.4, 0.35, 0.1, 0.1, 0.05]),
                "flag": "SF", "duration": ("choice", [0, 0, 0, 1, 2, 5, 30, 300], None),
                "src_bytes": ("logn", 6.5, 1.5), "dst_bytes": ("logn", 5.0, 2.0), "logged_in": 1,
                "count": ("int", 1, 10), "srv_count": ("int", 1, 10), "same_srv_rate": ("rate", 0.5, 1.0),
                "diff_srv_rate": ("rate", 0.0, 0.3), "dst_host_count": ("int", 1, 255),
                "dst_host_srv_count": ("int", 1, 255), "dst_host_same_srv_rate": ("rate", 0.1, 1.0),
                "dst_host_diff_srv_rate": ("rate", 0.0, 0.1), "dst_host_same_src_port_rate": ("rate", 0.0, 0.5),
                "hot": ("choice", [0, 0, 0, 0, 1, 2, 4], None), "num_file_creations": ("choice", [0] * 19 + [1], None),
                "num_access_files": ("choice", [0] * 19 + [1], None)}),
        (0.22, {"protocol_type": "udp", "service": ("choice", ["domain_u", "private", "ntp_u", "other"], [0.7, 0.15, 0.1, 0.05]),
                "flag": "SF", "src_bytes": ("int", 28, 110), "dst_bytes": ("int", 0, 150),
                "count": ("int", 1, 200), "srv_count": ("int", 1, 200), "same_srv_rate": ("rate", 0.8, 1.0),
                "diff_srv_rate": ("rate", 0.0, 0.05), "srv_diff_host_rate": ("rate", 0.0, 0.2),
                "dst_host_count": 255, "dst_host_srv_count": ("int", 150, 255),
                "dst_host_same_srv_rate": ("rate", 0.6, 1.0), "dst_host_diff_srv_rate": ("rate", 0.0, 0.05)}),
        (0.08, {"protocol_type": "icmp", "service": ("choice", ["ecr_i", "eco_i", "urp_i", "tim_i"], [0.5, 0.3, 0.15, 0.05]),
                "flag": "SF", "src_bytes": ("choice", [8, 18, 30, 520, 1032], None),
                "count": ("int", 1, 10), "srv_count": ("int", 1, 20), "same_srv_rate": 1.0,
                "srv_diff_host_rate": ("rate", 0.0, 1.0), "dst_host_count": ("int", 1, 255),
                "dst_host_srv_count": ("int", 1, 100), "dst_host_same_srv_rate": ("rate", 0.0, 1.0),
                "dst_host_same_src_port_rate": ("rate", 0.0, 1.0)}),
    ],
    "smurf": [
        (1.0, {"protocol_type": "icmp", "service": "ecr_i", "flag": "SF",
               "src_bytes": ("choice", [1032, 520], [0.75, 0.25]), "count": ("choice", [511, 511, 511, ("int", 200, 510)], None),
               "srv_count": ("choice", [511, 511, 511, ("int", 200, 510)], None), "same_srv_rate": 1.0,
               "dst_host_count": 255, "dst_host_srv_count": 255, "dst_host_same_srv_rate": 1.0,
               "dst_host_same_src_port_rate": 1.0}),
    ],
    "neptune": [
        (0.9, {"protocol_type": "tcp", "service": ("choice", ["private", "other", "telnet", "http", "ftp_data", "finger", "smtp"], [0.65, 0.1, 0.05, 0.05, 0.05, 0.05, 0.05]),
               "flag": "S0", "count": ("int", 100, 300), "srv_count": ("int", 1, 30), "serror_rate": 1.0,
               "srv_serror_rate": 1.0, "same_srv_rate": ("rate", 0.0, 0.12), "diff_srv_rate": ("rate", 0.05, 0.08),
               "dst_host_count": 255, "dst_host_srv_count": ("int", 1, 30), "dst_host_same_srv_rate": ("rate", 0.0, 0.12),
               "dst_host_diff_srv_rate": ("rate", 0.05, 0.08), "dst_host_serror_rate": 1.0,
               "dst_host_srv_serror_rate": 1.0}),
        (0.1, {"protocol_type": "tcp", "service": ("choice", ["private", "other"], None), "flag": "REJ",
               "count": ("int", 100, 300), "srv_count": ("int", 1, 30), "rerror_rate": 1.0, "srv_rerror_rate": 1.0,
               "same_srv_rate": ("rate", 0.0, 0.12), "diff_srv_rate": ("rate", 0.05, 0.08), "dst_host_count": 255,
               "dst_host_srv_count": ("int", 1, 30), "dst_host_same_srv_rate": ("rate", 0.0, 0.12),
               "dst_host_rerror_rate": 1.0, "dst_host_srv_rerror_rate": 1.0}),
    ],
    "back": [
        (1.0, {"protocol_type": "tcp", "service": "http", "flag": ("choice", ["SF", "RSTR"], [0.9, 0.1]),
               "src_bytes": 54540, "dst_bytes": ("choice", [8314, 7300], None), "hot": 2, "logged_in": 1,
               "num_compromised": 1, "count": ("int", 1, 12), "srv_count": ("int", 1, 12), "same_srv_rate": 1.0,
               "dst_host_count": ("int", 1, 255), "dst_host_srv_count": ("int", 1, 255),
               "dst_host_same_srv_rate": 1.0, "dst_host_same_src_port_rate": ("rate", 0.0, 0.1)}),
    ],
    "teardrop": [
        (1.0, {"protocol_type": "udp", "service": "private", "flag": "SF", "src_bytes": 28, "wrong_fragment": 3,
               "count": ("int", 1, 100), "srv_count": ("int", 1, 100), "same_srv_rate": 1.0,
               "dst_host_count": ("int", 10, 255), "dst_host_srv_count": ("int", 1, 100),
               "dst_host_same_srv_rate": ("rate", 0.0, 0.5), "dst_host_diff_srv_rate": ("rate", 0.0, 0.1)}),
    ],
    "pod": [
        (1.0, {"protocol_type": "icmp", "service": ("choice", ["ecr_i", "tim_i"], [0.9, 0.1]), "flag": "SF",
               "src_bytes": 1480, "wrong_fragment": 1, "count": ("int", 1, 5), "srv_count": ("int", 1, 5),
               "same_srv_rate": 1.0, "dst_host_count": ("int", 1, 255), "dst_host_srv_count": ("int", 1, 255),
               "dst_host_same_srv_rate": ("rate", 0.3, 1.0), "dst_host_same_src_port_rate": ("rate", 0.3, 1.0)}),
    ],
    "land": [
        (1.0, {"protocol_type": "tcp", "service": ("choice", ["finger", "telnet", "http", "private"], None),
               "flag": "S0", "land": 1, "count": ("int", 1, 2), "srv_count": ("int", 1, 2), "serror_rate": 1.0,
               "srv_serror_rate": 1.0, "same_srv_rate": 1.0, "dst_host_count": ("int", 1, 255),
               "dst_host_srv_count": ("int", 1, 10), "dst_host_serror_rate": ("rate", 0.5, 1.0),
               "dst_host_srv_serror_rate": ("rate", 0.5, 1.0)}),
    ],
    "satan": [
        (0.6, {"protocol_type": "tcp", "service": ("choice", ["private", "other", "telnet", "ftp", "finger", "http", "smtp", "domain"], None),
               "flag": ("choice", ["REJ", "S0", "RSTO", "SF"], [0.6, 0.2, 0.1, 0.1]), "count": ("int", 1, 50),
               "srv_count": ("int", 1, 5), "rerror_rate": ("rate", 0.5, 1.0), "srv_rerror_rate": ("rate", 0.5, 1.0),
               "same_srv_rate": ("rate", 0.0, 0.3), "diff_srv_rate": ("rate", 0.5, 1.0),
               "dst_host_count": ("int", 1, 255), "dst_host_srv_count": ("int", 1, 5),
               "dst_host_same_srv_rate": ("rate", 0.0, 0.1), "dst_host_diff_srv_rate": ("rate", 0.3, 1.0),
               "dst_host_rerror_rate": ("rate", 0.5, 1.0), "dst_host_srv_rerror_rate": ("rate", 0.5, 1.0)}),
        (0.4, {"protocol_type": "udp", "service": "private", "flag": "SF", "src_bytes": ("int", 0, 5),
               "dst_bytes": ("int", 0, 5), "count": ("int", 1, 50), "srv_count": ("int", 1, 5),
               "same_srv_rate": ("rate", 0.0, 0.3), "diff_srv_rate": ("rate", 0.5, 1.0),
               "dst_host_count": ("int", 1, 255), "dst_host_srv_count": ("int", 1, 5),
               "dst_host_diff_srv_rate": ("rate", 0.3, 1.0)}),
    ],
    "ipsweep": [
        (1.0, {"protocol_type": "icmp", "service": ("choice", ["eco_i", "ecr_i"], [0.9, 0.1]), "flag": "SF",
               "src_bytes": ("choice", [8, 18], None), "count": ("int", 1, 3), "srv_count": ("int", 1, 30),
               "same_srv_rate": 1.0, "srv_diff_host_rate": 1.0, "dst_host_count": ("int", 1, 100),
               "dst_host_srv_count": ("int", 1, 80), "dst_host_same_srv_rate": 1.0,
               "dst_host_same_src_port_rate": 1.0, "dst_host_srv_diff_host_rate": ("rate", 0.3, 1.0)}),
    ],
    "portsweep": [
        (1.0, {"protocol_type": "tcp", "service": ("choice", ["private", "other", "ftp_data", "telnet"], [0.7, 0.1, 0.1, 0.1]),
               "flag": ("choice", ["REJ", "RSTR", "RSTOS0", "SF"], [0.4, 0.4, 0.1, 0.1]),
               "duration": ("choice", [0, 0, 0, ("int", 1, 30000)], None), "count": ("int", 1, 2),
               "srv_count": ("int", 1, 2), "rerror_rate": ("rate", 0.5, 1.0), "srv_rerror_rate": 1.0,
               "same_srv_rate": ("rate", 0.5, 1.0), "srv_diff_host_rate": ("rate", 0.0, 1.0),
               "dst_host_count": ("int", 1, 255), "dst_host_srv_count": ("int", 1, 3),
               "dst_host_same_srv_rate": ("rate", 0.0, 0.1), "dst_host_diff_srv_rate": ("rate", 0.3, 1.0),
               "dst_host_same_src_port_rate": ("rate", 0.5, 1.0), "dst_host_rerror_rate": ("rate", 0.3, 1.0),
               "dst_host_srv_rerror_rate": ("rate", 0.8, 1.0)}),
    ],
    "nmap": [
        (1.0, {"protocol_type": ("choice", ["tcp", "icmp", "udp"], [0.6, 0.3, 0.1]), "service": ("choice", ["private", "eco_i", "other"], None),
               "flag": ("choice", ["SF", "S0", "REJ"], None), "src_bytes": ("int", 0, 20), "count": ("int", 1, 3),
               "srv_count": ("int", 1, 3), "same_srv_rate": ("rate", 0.3, 1.0), "srv_diff_host_rate": ("rate", 0.0, 1.0),
               "dst_host_count": ("int", 1, 255), "dst_host_srv_count": ("int", 1, 20),
               "dst_host_same_srv_rate": ("rate", 0.0, 0.3), "dst_host_diff_srv_rate": ("rate", 0.3, 1.0),
               "dst_host_same_src_port_rate": ("rate", 0.5, 1.0)}),
    ],
    "warezclient": [
        (1.0, {"protocol_type": "tcp", "service": ("choice", ["ftp_data", "ftp"], [0.6, 0.4]), "flag": "SF",
               "duration": ("choice", [0, ("int", 1, 15000)], [0.5, 0.5]), "src_bytes": ("logn", 9.0, 2.0),
               "dst_bytes": ("logn", 4.0, 3.0), "hot": ("int", 0, 28), "logged_in": 1,
               "is_guest_login": ("bern", 0.7), "count": ("int", 1, 5), "srv_count": ("int", 1, 5),
               "same_srv_rate": 1.0, "dst_host_count": ("int", 1, 255), "dst_host_srv_count": ("int", 1, 100),
               "dst_host_same_srv_rate": ("rate", 0.0, 1.0), "dst_host_same_src_port_rate": ("rate", 0.0, 1.0)}),
    ],
    "guess_passwd": [
        (1.0, {"protocol_type": "tcp", "service": ("choice", ["telnet", "pop_3", "imap4"], [0.9, 0.05, 0.05]),
               "flag": ("choice", ["RSTO", "SF"], [0.7, 0.3]), "duration": ("int", 0, 5), "src_bytes": 125,
               "dst_bytes": 179, "num_failed_logins": 1, "count": 1, "srv_count": 1, "same_srv_rate": 1.0,
               "rerror_rate": ("rate", 0.0, 1.0), "dst_host_count": ("int", 1, 255), "dst_host_srv_count": ("int", 1, 60),
               "dst_host_same_srv_rate": ("rate", 0.5, 1.0), "dst_host_same_src_port_rate": ("rate", 0.0, 0.1),
               "dst_host_rerror_rate": ("rate", 0.0, 1.0)}),
    ],
    "warezmaster": [
        (1.0, {"protocol_type": "tcp", "service": ("choice", ["ftp", "ftp_data"], [0.8, 0.2]), "flag": "SF",
               "duration": ("int", 1, 25000), "src_bytes": ("int", 200, 600), "dst_bytes": ("logn", 13.0, 1.5),
               "hot": ("int", 10, 30), "logged_in": 1, "is_guest_login": 1, "count": 1, "srv_count": 1,
               "same_srv_rate": 1.0, "dst_host_count": ("int", 1, 10), "dst_host_srv_count": ("int", 1, 10),
               "dst_host_same_srv_rate": 1.0, "dst_host_same_src_port_rate": ("rate", 0.0, 1.0)}),
    ],
    "imap": [
        (1.0, {"protocol_type": "tcp", "service": "imap4", "flag": ("choice", ["SH", "S0", "SF", "RSTO"], None),
               "duration": ("choice", [0, ("int", 1, 60)], None), "src_bytes": ("choice", [0, ("int", 1000, 3000)], None),
               "dst_bytes": ("int", 0, 5000), "count": ("int", 1, 50), "srv_count": ("int", 1, 50),
               "serror_rate": ("rate", 0.0, 1.0), "same_srv_rate": 1.0, "dst_host_count": ("int", 1, 255),
               "dst_host_srv_count": ("int", 1, 20), "dst_host_serror_rate": ("rate", 0.0, 1.0)}),
    ],
    "ftp_write": [
        (1.0, {"protocol_type": "tcp", "service": ("choice", ["ftp", "ftp_data", "login"], None), "flag": "SF",
               "duration": ("int", 0, 200), "src_bytes": ("int", 100, 700), "dst_bytes": ("int", 0, 3000),
               "hot": ("int", 0, 4), "logged_in": 1, "num_file_creations": ("int", 0, 2),
               "num_access_files": ("int", 0, 1), "count": 1, "srv_count": 1, "same_srv_rate": 1.0,
               "dst_host_count": ("int", 1, 50), "dst_host_srv_count": ("int", 1, 50),
               "dst_host_same_srv_rate": ("rate", 0.2, 1.0)}),
    ],
    "multihop": [
        (1.0, {"protocol_type": "tcp", "service": ("choice", ["telnet", "ftp_data", "ftp"], None), "flag": "SF",
               "duration": ("int", 100, 1500), "src_bytes": ("int", 500, 2000), "dst_bytes": ("int", 500, 20000),
               "hot": ("int", 0, 10), "logged_in": 1, "num_compromised": ("int", 0, 2),
               "num_file_creations": ("int", 0, 4), "num_access_files": ("int", 0, 2), "count": 1, "srv_count": 1,
               "same_srv_rate": 1.0, "dst_host_count": ("int", 1, 20), "dst_host_srv_count": ("int", 1, 20),
               "dst_host_same_srv_rate": 1.0}),
    ],
    "phf": [
        (1.0, {"protocol_type": "tcp", "service": "http", "flag": "SF", "src_bytes": 51, "dst_bytes": 8127,
               "hot": ("int", 0, 2), "logged_in": 1, "num_compromised": ("int", 0, 1), "count": 1, "srv_count": 1,
               "same_srv_rate": 1.0, "dst_host_count": ("int", 1, 10), "dst_host_srv_count": ("int", 1, 10),
               "dst_host_same_srv_rate": 1.0}),
    ],
    "spy": [
        (1.0, {"protocol_type": "tcp", "service": "telnet", "flag": "SF", "duration": ("int", 10000, 30000),
               "src_bytes": ("int", 1000, 40000), "dst_bytes": ("int", 5000, 80000), "hot": ("int", 0, 2),
               "logged_in": 1, "num_file_creations": ("int", 0, 1), "count": 1, "srv_count": 1, "same_srv_rate": 1.0,
               "dst_host_count": ("int", 1, 5), "dst_host_srv_count": ("int", 1, 5), "dst_host_same_srv_rate": 1.0}),
    ],
    "buffer_overflow": [
        (1.0, {"protocol_type": "tcp", "service": ("choice", ["telnet", "ftp_data"], [0.7, 0.3]), "flag": "SF",
               "duration": ("int", 0, 300), "src_bytes": ("int", 100, 3000), "dst_bytes": ("int", 0, 10000),
               "hot": ("int", 0, 3), "logged_in": 1, "num_compromised": ("int", 0, 2), "root_shell": ("bern", 0.7),
               "num_root": ("int", 0, 3), "num_file_creations": ("int", 0, 2), "num_shells": ("int", 0, 1),
               "num_access_files": ("int", 0, 1), "count": 1, "srv_count": 1, "same_srv_rate": 1.0,
               "dst_host_count": ("int", 1, 100), "dst_host_srv_count": ("int", 1, 50),
               "dst_host_same_srv_rate": ("rate", 0.1, 1.0)}),
    ],
    "rootkit": [
        (1.0, {"protocol_type": ("choice", ["tcp", "udp"], [0.7, 0.3]), "service": ("choice", ["telnet", "ftp_data", "private"], None),
               "flag": "SF", "duration": ("int", 0, 500), "src_bytes": ("int", 0, 2000), "dst_bytes": ("int", 0, 5000),
               "hot": ("int", 0, 2), "logged_in": ("bern", 0.7), "num_compromised": ("int", 0, 1),
               "root_shell": ("bern", 0.3), "num_file_creations": ("int", 0, 2), "count": ("int", 1, 3),
               "srv_count": ("int", 1, 3), "same_srv_rate": 1.0, "dst_host_count": ("int", 1, 100),
               "dst_host_srv_count": ("int", 1, 50), "dst_host_same_srv_rate": ("rate", 0.1, 1.0)}),
    ],
    "loadmodule": [
        (1.0, {"protocol_type": "tcp", "service": ("choice", ["telnet", "ftp_data"], [0.8, 0.2]), "flag": "SF",
               "duration": ("int", 0, 200), "src_bytes": ("int", 200, 2000), "dst_bytes": ("int", 1000, 8000),
               "hot": ("int", 0, 2), "logged_in": 1, "root_shell": ("bern", 0.5), "num_file_creations": ("int", 0, 2),
               "num_shells": ("int", 0, 1), "count": 1, "srv_count": 1, "same_srv_rate": 1.0,
               "dst_host_count": ("int", 1, 50), "dst_host_srv_count": ("int", 1, 20)}),
    ],
    "perl": [
        (1.0, {"protocol_type": "tcp", "service": "telnet", "flag": "SF", "duration": ("int", 10, 200),
               "src_bytes": ("int", 500, 2000), "dst_bytes": ("int", 1000, 8000), "hot": ("int", 1, 3),
               "logged_in": 1, "root_shell": 1, "num_root": ("int", 1, 3), "num_shells": ("int", 0, 1),
               "num_file_creations": ("int", 0, 1), "count": 1, "srv_count": 1, "same_srv_rate": 1.0,
               "dst_host_count": ("int", 1, 20), "dst_host_srv_count": ("int", 1, 20)}),
    ],
}


def _draw(rng, spec, n):
    """Sample ``n`` values from a profile entry."""
    if not isinstance(spec, tuple):
        return np.full(n, spec, dtype=object if isinstance(spec, str) else np.float64)
    kind = spec[0]
    if kind == "int":
        return rng.integers(spec[1], spec[2] + 1, size=n).astype(np.float64)
    if kind == "rate":
        return np.round(rng.uniform(spec[1], spec[2], size=n), 2)
    if kind == "logn":
        return np.round(rng.lognormal(spec[1], spec[2], size=n))
    if kind == "bern":
        return (rng.random(n) < spec[1]).astype(np.float64)
    if kind == "choice":
        options, probs = spec[1], spec[2]
        pick = rng.choice(len(options), size=n, p=probs)
        symbolic = all(isinstance(o, str) for o in options)
        out = np.empty(n, dtype=object if symbolic else np.float64)
        for i, opt in enumerate(options):
            mask = pick == i
            if mask.any():
                out[mask] = _draw(rng, opt, int(mask.sum()))
        return out
    raise ValueError(f"unknown profile entry {spec!r}")


def generate_raw(counts: dict, seed: int = 0) -> RawRecords:
    """Raw records with exactly ``counts[subcategory]`` rows each, shuffled."""
    rng = np.random.default_rng(seed)
    numeric, symbolic, subs = [], [], []
    for name, n in counts.items():
        if n <= 0:
            continue
        variants = PROFILES[name]
        weights = np.array([w for w, _ in variants], dtype=np.float64)
        split = rng.multinomial(n, weights / weights.sum())
        for (_, profile), m in zip(variants, split):
            if m == 0:
                continue
            num = np.zeros((m, len(NUMERIC_COLUMNS)))
            for j, col in enumerate(NUMERIC_COLUMNS):
                spec = profile.get(FEATURE_NAMES[col], 0)
                num[:, j] = _draw(rng, spec, m)
            sym = np.empty((m, len(SYMBOLIC_COLUMNS)), dtype=object)
            for j, col in enumerate(SYMBOLIC_COLUMNS):
                sym[:, j] = _draw(rng, profile[FEATURE_NAMES[col]], m)
            numeric.append(num)
            symbolic.append(sym)
            subs.extend([name] * m)
    order = rng.permutation(len(subs))
    return RawRecords(
        np.concatenate(numeric)[order], np.concatenate(symbolic)[order], np.array(subs, dtype=object)[order]
    )


def subcategory_counts_10_percent() -> dict:
    return {name: n for name, (n, _) in SUBCATEGORIES_10_PERCENT.items()}


def format_record(numeric_row, symbolic_row, label) -> str:
    fields = []
    ni = si = 0
    for col in range(len(FEATURE_NAMES)):
        if col in SYMBOLIC_COLUMNS:
            fields.append(str(symbolic_row[si]))
            si += 1
        else:
            v = float(numeric_row[ni])
            fields.append(str(int(v)) if v.is_integer() else f"{v:.2f}")
            ni += 1
    return ",".join(fields) + f",{label}."


def kdd_like_lines(n_rows: int, seed: int = 1, generator_seed: int = 0, min_per_category: int = 2) -> list:
    """Lines of a stratified ``n_rows`` sample drawn from a synthetic full-size "10% KDD".

    The full table has the exact published subcategory counts; rows are picked
    with the same sampler as :func:`stratified_subsample`.
    """
    raw = generate_raw(subcategory_counts_10_percent(), generator_seed)
    cat_index = {c: i for i, c in enumerate(CATEGORIES)}
    labels = np.array([cat_index[SUBCATEGORY_MAP[s]] for s in raw.subcategory])
    rows = subsample_indices(labels, len(CATEGORIES), n_rows, seed, min_per_category)
    return [format_record(raw.numeric[i], raw.symbolic[i], raw.subcategory[i]) for i in rows]


def write_kdd_like(path, n_rows: int, seed: int = 1, generator_seed: int = 0):
    lines = kdd_like_lines(n_rows, seed, generator_seed)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return len(lines)
