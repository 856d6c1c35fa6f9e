import numpy as np

from ductscatter import reference_example as ref
from ductscatter.kernel_solvers import glm_kernel, glm_reconstruct, marchenko_right
from ductscatter.numerics import ComplexSamples, RealGrid, graded_kgrid
from ductscatter.phase_retrieval import even_mag


def kpos():
    k = graded_kgrid().points
    return RealGrid(k[k > 0])


def test_glm_kernel_free_case_closed_form():
    # |F|^2 = k^2 + 1 -> C(a) = -(1/2) e^{-a}
    k = kpos().points
    ker = glm_kernel(even_mag(kpos(), np.sqrt(k**2 + 1.0)), step=0.05, xmax=5.0)
    a = np.arange(0.0, 2 * 5.0 + 2 * 0.05 + 1e-12, 0.05)
    assert np.max(np.abs(ker.profile - (-0.5 * np.exp(-a)))) < 1e-4


def test_glm_free_potential_round_trip():
    k = kpos().points
    q, bp, _ = glm_reconstruct(even_mag(kpos(), np.sqrt(k**2 + 1.0)), ref.LENGTH)
    assert np.max(np.abs(q.values)) <= 1e-3
    assert abs(bp.cot_alpha - (-1.0)) <= 1e-4


def test_glm_reference_round_trip():
    k = kpos().points
    mag = even_mag(kpos(), np.abs(ref.jost_function_exact(k)))
    q, bp, _ = glm_reconstruct(mag, ref.LENGTH)
    xs = np.linspace(0.0, ref.LENGTH - 0.5, 600)
    exact = ref.q_potential(xs)
    rel = np.linalg.norm(q.interpolant()(xs) - exact) / np.linalg.norm(exact)
    assert rel < 0.02
    assert abs(bp.cot_alpha - ref.COT_ALPHA) < 1e-3


def test_marchenko_right_reference():
    k = kpos().points
    L = ComplexSamples(kpos(), ref.ell_coefficient(k))
    _, q = marchenko_right(L, ref.LENGTH)
    xs = np.linspace(0.0, ref.LENGTH - 0.5, 600)
    exact = ref.q_potential(xs)
    rel = np.linalg.norm(q.interpolant()(xs) - exact) / np.linalg.norm(exact)
    assert rel < 0.02
