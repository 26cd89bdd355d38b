"""Shared fixtures: the synthetic image corpus, CLI runner, and the
independent brute-force encoder used to cross-check PIFS encoding."""

import contextlib
import io

import numpy as np
import pytest

import chaoscope as c
from chaoscope.cli import main
from chaoscope.compression import apply_isometry


def _gauss_kernel(sigma, radius):
    xs = np.arange(-radius, radius + 1, dtype=float)
    k = np.exp(-0.5 * (xs / sigma) ** 2)
    return k / k.sum()


def make_ramp64():
    col = np.round(255 * np.arange(64) / 63).astype(np.uint8)
    return c.GrayImage(pixels=np.tile(col, (64, 1)))


def make_blob64():
    yy, xx = np.mgrid[0:64, 0:64]
    g = np.exp(-(((xx - 32) ** 2 + (yy - 32) ** 2) / (2 * 14.0 ** 2)))
    return c.GrayImage(pixels=np.round(255 * g).astype(np.uint8))


def make_blurred_checker64():
    yy, xx = np.mgrid[0:64, 0:64]
    base = (((xx // 32) + (yy // 32)) % 2).astype(np.float64)
    k = _gauss_kernel(4.0, 12)
    sm = np.apply_along_axis(lambda r: np.convolve(r, k, mode="same"), 1, base)
    sm = np.apply_along_axis(lambda col: np.convolve(col, k, mode="same"), 0, sm)
    return c.GrayImage(pixels=np.round(255 * sm).astype(np.uint8))


@pytest.fixture(scope="session")
def corpus64():
    return {
        "ramp": make_ramp64(),
        "blob": make_blob64(),
        "checker": make_blurred_checker64(),
    }


@pytest.fixture(scope="session")
def sierpinski_depth7():
    start = c.BinaryImage.full(1024, 1024)
    return c.ifs_iterate(c.sierpinski_ifs(), start, 7)


def brute_force_encode(img, rs, step, s_max):
    """Pixel-space exhaustive search over (domain, isometry, s_q, o_q).

    Errors are exact integers (residuals scaled by 252); candidates are
    compared as (error, domain_y, domain_x, isometry, s_q, o_q) tuples so
    tie-breaking is total and matches the documented encoder order.
    """
    px = img.pixels.astype(np.int64)
    h, w = px.shape
    s_cap = min(63, int(np.floor(63.0 * s_max + 1e-9)))
    o_grid = np.arange(-255, 256, dtype=np.int64)
    results = []
    for ry in range(0, h, rs):
        for rx in range(0, w, rs):
            r = px[ry : ry + rs, rx : rx + rs].ravel()
            best = None
            for dy in range(0, h - 2 * rs + 1, step):
                for dx in range(0, w - 2 * rs + 1, step):
                    block = px[dy : dy + 2 * rs, dx : dx + 2 * rs]
                    sums = block.reshape(rs, 2, rs, 2).sum(axis=(1, 3))
                    for t in range(8):
                        st = apply_isometry(sums, t).ravel()
                        for s_q in range(-s_cap, s_cap + 1):
                            resid = (
                                s_q * st[None, :]
                                + 252 * o_grid[:, None]
                                - 252 * r[None, :]
                            )
                            errs = (resid * resid).sum(axis=1)
                            oi = int(np.argmin(errs))  # first min = smallest o_q
                            key = (int(errs[oi]), dy, dx, t, s_q, int(o_grid[oi]))
                            if best is None or key < best:
                                best = key
            results.append(best)
    return results


@pytest.fixture
def brute_force_encoder():
    return brute_force_encode


@pytest.fixture
def run_cli():
    """Invoke the CLI in-process; returns (exit_code, stdout_text)."""

    def runner(argv):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main(argv)
        return code, buf.getvalue()

    return runner
