#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bipsim/analysis.hpp"
#include "bipsim/coefficients.hpp"
#include "bipsim/core_ops.hpp"
#include "bipsim/errors.hpp"
#include "bipsim/evolution.hpp"
#include "bipsim/experiments.hpp"
#include "bipsim/fields.hpp"
#include "bipsim/grid.hpp"
#include "bipsim/hamiltonian.hpp"
#include "bipsim/version.hpp"

namespace py = pybind11;
using namespace bipsim;

namespace {

std::string grid_repr(const Grid1D& g) {
  std::ostringstream out;
  out << "Grid1D(" << g.x_min() << ", " << g.x_max() << ", " << g.n_points() << ")";
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_bipsim, m) {
  m.doc() = "Two-argument wave functions on a 1D grid: spectra, unitary "
            "evolution, entanglement measures, and two-slit experiments.";
  m.attr("__version__") = std::string(kVersion);

  // Translators run newest-first, so derived exception types come last.
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  auto precondition =
      py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<ZeroProbabilityError>(m, "ZeroProbabilityError", precondition.ptr());

  py::class_<Grid1D>(m, "Grid1D",
                     "Uniform grid on [x_min, x_max] with hard walls at both ends.")
      .def(py::init<double, double, int>(), py::arg("x_min"), py::arg("x_max"),
           py::arg("n_points"))
      .def_property_readonly("x_min", &Grid1D::x_min)
      .def_property_readonly("x_max", &Grid1D::x_max)
      .def_property_readonly("n_points", &Grid1D::n_points)
      .def_property_readonly("spacing", &Grid1D::spacing)
      .def("points", &Grid1D::points)
      .def(py::self == py::self)
      .def(py::self != py::self)
      .def("__repr__", &grid_repr);

  py::class_<PhysicalConstants>(m, "PhysicalConstants")
      .def(py::init<double, double>(), py::arg("hbar") = 1.0, py::arg("mass") = 1.0)
      .def_readonly("hbar", &PhysicalConstants::hbar)
      .def_readonly("mass", &PhysicalConstants::mass);

  py::class_<PotentialSpec>(m, "PotentialSpec")
      .def_static("infinite_well", &PotentialSpec::infinite_well)
      .def_static("harmonic", &PotentialSpec::harmonic, py::arg("omega"))
      .def_static("double_well", &PotentialSpec::double_well, py::arg("barrier_height"),
                  py::arg("barrier_half_width"))
      .def_static("tabulated", &PotentialSpec::tabulated, py::arg("values"))
      .def("evaluate", &PotentialSpec::evaluate, py::arg("grid"), py::arg("constants"));

  py::class_<ScalarField>(m, "ScalarField",
                          "psi(x) sampled on a grid; norm uses sum |psi|^2 * spacing.")
      .def(py::init<const Grid1D&, Eigen::VectorXcd>(), py::arg("grid"), py::arg("values"))
      .def_property_readonly("grid", &ScalarField::grid)
      .def_property_readonly("values",
                             [](const ScalarField& f) { return f.values(); })
      .def_property_readonly("norm_sq", &ScalarField::norm_sq)
      .def_property_readonly("is_normalized", &ScalarField::is_normalized)
      .def_static("zero", &ScalarField::zero, py::arg("grid"));

  m.def("normalized", &normalized, py::arg("psi"),
        "psi rescaled to unit norm; raises on a zero field.");

  py::class_<KernelField>(m, "KernelField",
                          "Psi(x, y) on grid x grid; values[i, j] = Psi(x_i, y_j).")
      .def(py::init<const Grid1D&, Eigen::MatrixXcd>(), py::arg("grid"), py::arg("values"))
      .def_property_readonly("grid", &KernelField::grid)
      .def_property_readonly("values",
                             [](const KernelField& f) { return f.values(); })
      .def_property_readonly("norm_sq", &KernelField::norm_sq)
      .def_property_readonly("is_normalized", &KernelField::is_normalized)
      .def_property_readonly("hermiticity_defect", &KernelField::hermiticity_defect)
      .def_property_readonly("is_hermitian", &KernelField::is_hermitian);

  py::class_<CoefficientMatrix>(m, "CoefficientMatrix",
                                "Square expansion coefficients over an orthonormal basis.")
      .def(py::init<Eigen::MatrixXcd>(), py::arg("entries"))
      .def_property_readonly("entries",
                             [](const CoefficientMatrix& c) { return c.entries(); })
      .def_property_readonly("dim", &CoefficientMatrix::dim)
      .def_property_readonly("norm_sq", &CoefficientMatrix::norm_sq)
      .def_property_readonly("is_normalized", &CoefficientMatrix::is_normalized)
      .def_property_readonly("hermiticity_defect", &CoefficientMatrix::hermiticity_defect)
      .def_property_readonly("is_hermitian", &CoefficientMatrix::is_hermitian);

  m.def("inner_product", &inner_product, py::arg("f"), py::arg("g"),
        "sum conj(f_i) g_i * spacing; conjugate-linear in f.");
  m.def("kernel_inner_product", &kernel_inner_product, py::arg("a"), py::arg("b"));
  m.def("kernel_from_product", &kernel_from_product, py::arg("psi"), py::arg("phi"),
        "Psi(x, y) = psi(x) conj(phi(y)).");
  m.def(
      "kernel_from_coefficients",
      [](const CoefficientMatrix& c, const std::vector<ScalarField>& basis) {
        return kernel_from_coefficients(c, std::span<const ScalarField>(basis));
      },
      py::arg("coefficients"), py::arg("basis"),
      "Psi = sum_nm c(n, m) basis_n(x) conj(basis_m(y)); basis must be orthonormal.");

  py::class_<DiscreteHamiltonian>(m, "DiscreteHamiltonian",
                                  "Symmetric tridiagonal operator with Dirichlet walls.")
      .def_property_readonly("grid", &DiscreteHamiltonian::grid)
      .def_property_readonly("constants", &DiscreteHamiltonian::constants)
      .def_property_readonly("diagonal",
                             [](const DiscreteHamiltonian& h) { return h.diagonal(); })
      .def_property_readonly("off_diagonal", &DiscreteHamiltonian::off_diagonal);

  m.def("build_hamiltonian", &build_hamiltonian, py::arg("grid"), py::arg("potential"),
        py::arg("constants") = PhysicalConstants{});
  m.def("apply_hamiltonian", &apply_hamiltonian, py::arg("hamiltonian"), py::arg("psi"));

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("grid", &Spectrum::grid)
      .def_readonly("constants", &Spectrum::constants)
      .def_readonly("energies", &Spectrum::energies)
      .def_readonly("states", &Spectrum::states)
      .def_property_readonly("count", &Spectrum::count);

  m.def("solve_spectrum", &solve_spectrum, py::arg("hamiltonian"), py::arg("k"),
        "k lowest eigenpairs, energies ascending, states L2-normalized.");

  py::class_<EvolutionParams>(m, "EvolutionParams")
      .def(py::init([](double dt, long n_steps, long record_every) {
             EvolutionParams p;
             p.dt = dt;
             p.n_steps = n_steps;
             p.record_every = record_every;
             return p;
           }),
           py::arg("dt") = 1e-3, py::arg("n_steps") = 1, py::arg("record_every") = 1)
      .def_readwrite("dt", &EvolutionParams::dt)
      .def_readwrite("n_steps", &EvolutionParams::n_steps)
      .def_readwrite("record_every", &EvolutionParams::record_every)
      .def("validate", &EvolutionParams::validate);

  py::class_<ScalarTrajectory>(m, "ScalarTrajectory")
      .def_readonly("times", &ScalarTrajectory::times)
      .def_readonly("snapshots", &ScalarTrajectory::snapshots);

  py::class_<KernelTrajectory>(m, "KernelTrajectory")
      .def_readonly("times", &KernelTrajectory::times)
      .def_readonly("snapshots", &KernelTrajectory::snapshots);

  m.def(
      "evolve_schrodinger",
      [](const ScalarField& psi0, const DiscreteHamiltonian& h, const EvolutionParams& p) {
        return evolve_schrodinger(psi0, h, p);
      },
      py::arg("psi0"), py::arg("hamiltonian"), py::arg("params"),
      "Cayley stepping of the one-argument equation; unitary for every dt.");
  m.def(
      "evolve_bipartite_grid",
      [](const KernelField& psi0, const DiscreteHamiltonian& h, const EvolutionParams& p) {
        return evolve_bipartite_grid(psi0, h, p);
      },
      py::arg("psi0"), py::arg("hamiltonian"), py::arg("params"),
      "Cayley stepping of the two-argument equation: Psi -> U Psi U^H.");
  m.def("evolve_bipartite_spectral", &evolve_bipartite_spectral, py::arg("c0"),
        py::arg("spectrum"), py::arg("t"),
        "Exact phases in the energy eigenbasis: c(n,m) picks up -(E_n - E_m) t / hbar.");

  py::class_<SchmidtDecomposition>(m, "SchmidtDecomposition")
      .def_readonly("coefficients", &SchmidtDecomposition::coefficients)
      .def_readonly("left_modes", &SchmidtDecomposition::left_modes)
      .def_readonly("right_modes", &SchmidtDecomposition::right_modes)
      .def_property_readonly("rank", &SchmidtDecomposition::rank);

  m.def("schmidt_decompose", &schmidt_decompose, py::arg("psi"));
  m.def("entropy", &entropy, py::arg("psi"),
        "-sum mu^2 ln mu^2 over the Schmidt coefficients; zero iff Psi factorizes.");
  m.def("entropy_from_weights", &entropy_from_weights, py::arg("weights"));

  py::enum_<Side>(m, "Side").value("X", Side::X).value("Y", Side::Y);

  py::class_<ReducedDensity>(m, "ReducedDensity")
      .def_readonly("grid", &ReducedDensity::grid)
      .def_readonly("side", &ReducedDensity::side)
      .def_readonly("matrix", &ReducedDensity::matrix)
      .def_readonly("trace", &ReducedDensity::trace);

  m.def("reduced_density", &reduced_density, py::arg("psi"), py::arg("side"),
        "Partial trace of |Psi><Psi| over the other argument.");

  py::class_<GridOperator>(m, "GridOperator")
      .def(py::init<const Grid1D&, Eigen::MatrixXcd>(), py::arg("grid"), py::arg("matrix"))
      .def_static("diagonal", &GridOperator::diagonal, py::arg("grid"), py::arg("values"))
      .def_static("position", &GridOperator::position, py::arg("grid"))
      .def_static("from_hamiltonian", &GridOperator::from_hamiltonian, py::arg("hamiltonian"))
      .def_property_readonly("grid", &GridOperator::grid)
      .def_property_readonly("matrix", [](const GridOperator& o) { return o.matrix(); })
      .def_property_readonly("hermiticity_defect", &GridOperator::hermiticity_defect);

  m.def("expectation", &expectation, py::arg("psi"), py::arg("observable"),
        "Tr[rho^H O rho] with rho the weighted kernel operator.");
  m.def("position_density", &position_density, py::arg("psi"),
        "Diagonal marginal d(x_i) = sum_j |Psi(x_i, y_j)|^2 * spacing.");

  py::class_<CoefficientExpansion>(m, "CoefficientExpansion")
      .def_readonly("coefficients", &CoefficientExpansion::coefficients)
      .def_readonly("captured_weight", &CoefficientExpansion::captured_weight)
      .def_readonly("truncated", &CoefficientExpansion::truncated);

  m.def("eigenbasis_coefficients", &eigenbasis_coefficients, py::arg("psi"),
        py::arg("spectrum"), py::arg("k"));

  py::class_<TransitionReport>(m, "TransitionReport")
      .def_readonly("probabilities", &TransitionReport::probabilities)
      .def_readonly("energy_shifts", &TransitionReport::energy_shifts)
      .def_readonly("expected_shift", &TransitionReport::expected_shift);

  m.def("transition_probabilities", &transition_probabilities, py::arg("coefficients"),
        py::arg("spectrum"),
        "Outcome probabilities p_m = sum_n |c(n,m)|^2 and conditional energy shifts.");

  py::class_<CollapseResult>(m, "CollapseResult")
      .def_readonly("state", &CollapseResult::state)
      .def_readonly("probability", &CollapseResult::probability)
      .def_readonly("energy_shift", &CollapseResult::energy_shift);

  m.def("collapse", &collapse, py::arg("psi"), py::arg("spectrum"), py::arg("level"),
        "Projective collapse onto a level: the stationary product psi_m psi_m*.");

  m.def("hermiticity_defect", &hermiticity_defect, py::arg("psi"),
        "max |Psi(x_i, y_j) - conj(Psi(x_j, y_i))|.");

  m.def("make_two_slit_modes", &make_two_slit_modes, py::arg("grid"), py::arg("separation"),
        py::arg("width"),
        "Two orthonormalized Gaussian packets straddling the grid midpoint.");
  m.def("make_screen_modes", &make_screen_modes, py::arg("grid"), py::arg("tilt"),
        py::arg("envelope_width"),
        "The same beams where they cross: one envelope, opposite phase tilts.");

  py::class_<TwoSlitFamily>(m, "TwoSlitFamily")
      .def(py::init<ScalarField, ScalarField, CoefficientMatrix>(), py::arg("mode_1"),
           py::arg("mode_2"), py::arg("a"))
      .def_readonly("mode_1", &TwoSlitFamily::mode_1)
      .def_readonly("mode_2", &TwoSlitFamily::mode_2)
      .def_readonly("a", &TwoSlitFamily::a);

  m.def("wave_coefficients", &wave_coefficients);
  m.def("particle_coefficients", &particle_coefficients);
  m.def("duality_coefficients", &duality_coefficients, py::arg("lambda_"),
        "Normalized blend (1 - lambda) * wave + lambda * particle.");
  m.def("two_slit_kernel", &two_slit_kernel, py::arg("family"));

  py::class_<DualityPoint>(m, "DualityPoint")
      .def_readonly("lambda_", &DualityPoint::lambda)
      .def_readonly("entropy", &DualityPoint::entropy)
      .def_readonly("visibility", &DualityPoint::visibility);

  m.def(
      "duality_scan",
      [](const ScalarField& mode_1, const ScalarField& mode_2,
         const std::vector<double>& lambdas) {
        return duality_scan(mode_1, mode_2, std::span<const double>(lambdas));
      },
      py::arg("mode_1"), py::arg("mode_2"), py::arg("lambdas"),
      "Entropy and fringe visibility along the wave-to-particle family.");

  py::class_<GapMeasurement>(m, "GapMeasurement")
      .def_readonly("level_a", &GapMeasurement::level_a)
      .def_readonly("level_b", &GapMeasurement::level_b)
      .def_readonly("measured_gap", &GapMeasurement::measured_gap)
      .def_readonly("spectral_gap", &GapMeasurement::spectral_gap)
      .def_readonly("abs_error", &GapMeasurement::abs_error)
      .def_readonly("rel_error", &GapMeasurement::rel_error)
      .def_readonly("fit_residual", &GapMeasurement::fit_residual);

  m.def(
      "gap_spectroscopy",
      [](const Spectrum& spectrum, const std::vector<std::pair<int, int>>& pairs,
         const DiscreteHamiltonian& h, const EvolutionParams& p) {
        return gap_spectroscopy(spectrum, std::span<const std::pair<int, int>>(pairs), h, p);
      },
      py::arg("spectrum"), py::arg("pairs"), py::arg("hamiltonian"), py::arg("params"),
      "Fit the beat phase of stationary products psi_a psi_b* to read off E_a - E_b.");
}
