"""Smoke test for the etacert_py extension module.

Build and run from the repository root:

    cargo build -p etacert-python --features extension-module --release
    cp target/release/libetacert_py.so python/etacert_py.so
    python3 python/smoke_test.py
"""

import json
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import etacert_py as ec


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def main():
    close(ec.QUANTUM_MAX_EBERHARD, (math.sqrt(2) - 1) / 2, 1e-15)
    close(ec.eta_ns(0.006951), 0.68305, 1e-5)

    qr = ec.min_efficiency_qr(0.006951)
    close(qr.eta, 0.753774, 1e-4)
    assert len(qr.realization.angles) == 5
    assert qr.achieved_value >= 0.006951 - 1e-6
    assert set(json.loads(qr.to_json())) == {
        "eta", "angles", "achieved_value", "iterations", "e_obs", "xi",
    }

    npa = ec.min_efficiency_npa(0.006951, level="2")
    close(npa.eta, 0.753773, 1e-5)

    value, bound = ec.max_noisy_eberhard_sdp(1.0)
    close(value, 0.2071067, 1e-6)
    assert bound >= value - 1e-9

    best, witness = ec.max_noisy_eberhard(1.0)
    assert best >= 0.207106
    b = witness.behavior()
    close(b.eberhard(), best, 1e-9)
    assert b.is_no_signaling(1e-12)
    close(b.chsh(), 4 * (best + 0.5), 1e-9)

    again = ec.Behavior.from_json(b.to_json())
    assert again.p == b.p

    sdp = json.loads(ec.export_sdp("1+AB", 0.9, 0.01))
    assert sdp["dimension"] == 9

    try:
        ec.min_efficiency_npa(0.3)
    except ValueError as err:
        assert "exceeds" in str(err)
    else:
        raise AssertionError("E_obs = 0.3 must be rejected")

    checks = ec.validate("core")
    assert checks and all(passed for _, _, passed, _, _ in checks)

    print("smoke test passed")


if __name__ == "__main__":
    main()
