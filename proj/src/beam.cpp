// SPDX-License-Identifier: Apache-2.0
//
// hydrosense: water-level sensing from bistatic downlink CSI
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "hydrosense/beam.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "hydrosense/csi_sim.hpp"
#include "hydrosense/error.hpp"

namespace hydrosense {

Real BeamWeights::max_residual(const ArrayConfig &array) const
{
    Real worst = 0.0;
    for (const auto &c : constraints)
    {
        const Complex response = w.dot(steering_vector(array, c.aoa)); // w^H a
        worst = std::max(worst, std::abs(response - c.gain));
    }
    return worst;
}

CMatrix loaded_covariance(const CMatrix &x, Real rho)
{
    require(rho >= 0.0, "diagonal loading must be >= 0", "rho");
    require(x.cols() >= 1, "covariance needs at least one snapshot");
    CMatrix r = x * x.adjoint() / static_cast<Real>(x.cols());
    r = 0.5 * (r + r.adjoint()).eval();
    r.diagonal().array() += rho;
    return r;
}

Real relative_loading(const CMatrix &x, Real relative)
{
    require(relative >= 0.0, "relative loading must be >= 0", "loading");
    return relative * x.squaredNorm() / static_cast<Real>(x.cols()) / static_cast<Real>(x.rows());
}

namespace {

template <typename Solver>
CMatrix solve_checked(const Solver &solver, const CMatrix &rhs)
{
    CMatrix x = solver.solve(rhs);
    if (!x.allFinite())
        fail(ErrorCode::Numerical, "covariance solve produced non-finite values");
    return x;
}

} // namespace

CVector mvdr_solve(const CMatrix &r, const CVector &a)
{
    require(r.rows() == r.cols() && r.rows() == a.size(), "MVDR dimension mismatch");
    Eigen::LDLT<CMatrix> ldlt(r);
    if (ldlt.info() != Eigen::Success)
        fail(ErrorCode::Numerical, "covariance factorization failed");
    const CVector x = solve_checked(ldlt, a);
    const Complex den = a.dot(x); // a^H R^-1 a
    if (!(std::abs(den) > 0.0) || !std::isfinite(std::abs(den)))
        fail(ErrorCode::Numerical, "MVDR normalization is zero or non-finite");
    // Dividing by den (not its real part) makes w^H a == 1 up to rounding.
    return x / den;
}

CVector lcmv_solve(const CMatrix &r, const CMatrix &c, const CVector &f)
{
    require(r.rows() == r.cols() && r.rows() == c.rows(), "LCMV dimension mismatch");
    require(c.cols() == f.size() && c.cols() >= 1 && c.cols() <= c.rows(), "LCMV constraint count mismatch");
    Eigen::LDLT<CMatrix> ldlt(r);
    if (ldlt.info() != Eigen::Success)
        fail(ErrorCode::Numerical, "covariance factorization failed");
    const CMatrix x = solve_checked(ldlt, c);
    const CMatrix g = c.adjoint() * x;

    Eigen::JacobiSVD<CMatrix> svd(g);
    const auto &sv = svd.singularValues();
    const Real cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
    if (!(cond <= kMaxConstraintCondition))
        fail(ErrorCode::IllConditioned,
             "constraint matrix condition number " + std::to_string(cond) + " exceeds 1e12; directions too close",
             "aoa");

    Eigen::FullPivLU<CMatrix> lu(g);
    CVector w = x * lu.solve(f);
    // Iterative refinement keeps C^H w - f at rounding level for moderately conditioned C^H R^-1 C.
    for (int it = 0; it < 3; ++it)
    {
        const CVector resid = f - c.adjoint() * w;
        if (resid.cwiseAbs().maxCoeff() < 1e-14)
            break;
        w += x * lu.solve(resid);
    }
    if (!w.allFinite())
        fail(ErrorCode::Numerical, "LCMV weights are non-finite");
    return w;
}

} // namespace hydrosense
