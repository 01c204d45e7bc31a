#include "fracfem/assembly.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "fracfem/complement.hpp"
#include "fracfem/element_quad.hpp"
#include "fracfem/kernel.hpp"
#include "fracfem/quadrature.hpp"

namespace fracfem {

DofMap make_dof_map(const SimplicialMesh& mesh) {
  DofMap dofs;
  dofs.dof_of_vertex.assign(mesh.vertices.size(), -1);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    if (!mesh.boundary_vertex[v]) {
      dofs.dof_of_vertex[v] = static_cast<int>(dofs.vertex_of_dof.size());
      dofs.vertex_of_dof.push_back(static_cast<int>(v));
    }
  return dofs;
}

namespace {

// Pair contributions are computed per chunk {e1 : e1 mod kChunks == c} into a
// packed upper-triangle buffer and merged in ascending chunk order, so the
// result is bitwise independent of the worker count.
constexpr int kChunks = 16;

std::size_t packed_index(int i, int j, int nd) {  // i <= j
  return static_cast<std::size_t>(i) * nd - static_cast<std::size_t>(i) * (i - 1) / 2 +
         (j - i);
}

struct PairAssembler {
  const SimplicialMesh& mesh;
  const DofMap& dofs;
  double s;
  QuadOrders orders;
  double kernel_exp;  // -(n/2 + s)

  void add_pair(int e1, int e2, std::vector<double>& buf) const {
    PairRule rule;
    if (mesh.dim == 1)
      rule = pair_rule_1d(mesh.vertex(e1, 0)[0], mesh.vertex(e1, 1)[0], mesh.vertex(e2, 0)[0],
                          mesh.vertex(e2, 1)[0], s, orders);
    else
      rule = pair_rule_2d({mesh.vertex(e1, 0), mesh.vertex(e1, 1), mesh.vertex(e1, 2)},
                          {mesh.vertex(e2, 0), mesh.vertex(e2, 1), mesh.vertex(e2, 2)}, s,
                          orders);
    const int nv = mesh.n_vertices_per_elem();
    // union of the two elements' vertices
    int gv[6], pos1[3], pos2[3], ng = 0;
    for (int a = 0; a < nv; ++a) {
      gv[ng] = mesh.elements[e1][a];
      pos1[a] = ng++;
    }
    for (int b = 0; b < nv; ++b) {
      const int v = mesh.elements[e2][b];
      int k = -1;
      for (int a = 0; a < nv; ++a)
        if (mesh.elements[e1][a] == v) k = pos1[a];
      if (k < 0) {
        gv[ng] = v;
        k = ng++;
      }
      pos2[b] = k;
    }
    double contrib[6][6] = {};
    for (const auto& pt : rule.points) {
      const Vec2 d = pt.x - pt.y;
      const double kern = pt.w * std::pow(dot(d, d), kernel_exp);
      const auto bx = barycentric(mesh, e1, pt.x);
      const auto by = barycentric(mesh, e2, pt.y);
      double diff[6] = {};
      for (int a = 0; a < nv; ++a) diff[pos1[a]] += bx[a];
      for (int b = 0; b < nv; ++b) diff[pos2[b]] -= by[b];
      for (int k = 0; k < ng; ++k) {
        const double dk = kern * diff[k];
        for (int l = k; l < ng; ++l) contrib[k][l] += dk * diff[l];
      }
    }
    const double mult = e1 == e2 ? 1.0 : 2.0;  // integrand is symmetric in (x,y)
    const int nd = dofs.n_dofs();
    for (int k = 0; k < ng; ++k) {
      const int i = dofs.dof_of_vertex[gv[k]];
      if (i < 0) continue;
      for (int l = k; l < ng; ++l) {
        const int j = dofs.dof_of_vertex[gv[l]];
        if (j < 0) continue;
        buf[packed_index(std::min(i, j), std::max(i, j), nd)] += mult * contrib[k][l];
      }
    }
  }

  void compute_chunk(int c, std::vector<double>& buf) const {
    const int m = static_cast<int>(mesh.n_elements());
    for (int e1 = c; e1 < m; e1 += kChunks)
      for (int e2 = e1; e2 < m; ++e2) add_pair(e1, e2, buf);
  }
};

}  // namespace

Eigen::MatrixXd assemble_stiffness(const SimplicialMesh& mesh, double s, int workers,
                                   const QuadOrders& orders) {
  const double cns = kernel_constant(mesh.dim, s).value;
  const DofMap dofs = make_dof_map(mesh);
  const int nd = dofs.n_dofs();
  const std::size_t packed = static_cast<std::size_t>(nd) * (nd + 1) / 2;
  std::vector<double> acc(packed, 0.0);
  const PairAssembler pa{mesh, dofs, s, orders, -(0.5 * mesh.dim + s)};

  workers = std::max(1, workers);
  if (workers == 1) {
    std::vector<double> buf(packed);
    for (int c = 0; c < kChunks; ++c) {
      std::fill(buf.begin(), buf.end(), 0.0);
      pa.compute_chunk(c, buf);
      for (std::size_t k = 0; k < packed; ++k) acc[k] += buf[k];
    }
  } else {
    std::mutex mtx;
    std::condition_variable cv;
    std::map<int, std::vector<double>> done;
    std::atomic<int> next{0};
    int allocated = 0, merged = 0;
    const int limit = workers + 1;
    auto work = [&] {
      for (;;) {
        {
          std::unique_lock lock(mtx);
          cv.wait(lock, [&] { return allocated < limit; });
          ++allocated;
        }
        const int c = next.fetch_add(1);
        if (c >= kChunks) {
          std::lock_guard lock(mtx);
          --allocated;
          cv.notify_all();
          return;
        }
        std::vector<double> buf(packed, 0.0);
        pa.compute_chunk(c, buf);
        std::lock_guard lock(mtx);
        done.emplace(c, std::move(buf));
        cv.notify_all();
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    {
      std::unique_lock lock(mtx);
      while (merged < kChunks) {
        cv.wait(lock, [&] { return done.count(merged) > 0; });
        std::vector<double> buf = std::move(done[merged]);
        done.erase(merged);
        lock.unlock();
        for (std::size_t k = 0; k < packed; ++k) acc[k] += buf[k];
        lock.lock();
        --allocated;
        ++merged;
        cv.notify_all();
      }
    }
    for (auto& t : pool) t.join();
  }

  Eigen::MatrixXd A(nd, nd);
  for (int i = 0; i < nd; ++i)
    for (int j = i; j < nd; ++j) A(i, j) = 0.5 * cns * acc[packed_index(i, j, nd)];
  // complement part: + C(n,s) * \int phi_i phi_j omega (sequential, deterministic)
  const int nv = mesh.n_vertices_per_elem();
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const auto local = complement_element_matrix(mesh, static_cast<int>(e), s);
    for (int a = 0; a < nv; ++a) {
      const int i = dofs.dof_of_vertex[mesh.elements[e][a]];
      if (i < 0) continue;
      for (int b = 0; b < nv; ++b) {
        const int j = dofs.dof_of_vertex[mesh.elements[e][b]];
        if (j < i) continue;
        A(i, j) += cns * local[a][b];
      }
    }
  }
  for (int i = 0; i < nd; ++i)
    for (int j = 0; j < i; ++j) A(i, j) = A(j, i);
  return A;
}

Eigen::SparseMatrix<double> assemble_mass(const SimplicialMesh& mesh) {
  const DofMap dofs = make_dof_map(mesh);
  const int nv = mesh.n_vertices_per_elem();
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const double scale = mesh.elem_measure[e] / (mesh.dim == 1 ? 6.0 : 12.0);
    for (int a = 0; a < nv; ++a) {
      const int i = dofs.dof_of_vertex[mesh.elements[e][a]];
      if (i < 0) continue;
      for (int b = 0; b < nv; ++b) {
        const int j = dofs.dof_of_vertex[mesh.elements[e][b]];
        if (j < 0) continue;
        trips.emplace_back(i, j, scale * (a == b ? 2.0 : 1.0));
      }
    }
  }
  Eigen::SparseMatrix<double> M(dofs.n_dofs(), dofs.n_dofs());
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

Eigen::VectorXd assemble_load(const SimplicialMesh& mesh,
                              const std::function<double(const Vec2&)>& f,
                              bool boundary_singular, int degree) {
  const DofMap dofs = make_dof_map(mesh);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(dofs.n_dofs());
  const int nv = mesh.n_vertices_per_elem();
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    for (int a = 0; a < nv; ++a) {
      const int i = dofs.dof_of_vertex[mesh.elements[e][a]];
      if (i < 0) continue;
      auto g = [&](const Vec2& x) {
        const double val = f(x) * barycentric(mesh, static_cast<int>(e), x)[a];
        if (std::isnan(val)) throw std::runtime_error("assemble_load: integrand returned NaN");
        return val;
      };
      F[i] += boundary_singular ? integrate_element_graded(mesh, static_cast<int>(e), g, degree)
                                : integrate_element(mesh, static_cast<int>(e), g, degree);
    }
  }
  return F;
}

std::pair<Eigen::VectorXd, Eigen::SparseMatrix<double>> assemble_semilinear(
    const SimplicialMesh& mesh, const Eigen::VectorXd& u, const NonlinearityPreset& preset,
    int degree) {
  const DofMap dofs = make_dof_map(mesh);
  const int nd = dofs.n_dofs();
  Eigen::VectorXd a_vec = Eigen::VectorXd::Zero(nd);
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::SparseMatrix<double> J(nd, nd);
  if (preset.tag == NonlinearityPreset::Tag::none) return {a_vec, J};
  const int nv = mesh.n_vertices_per_elem();
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    double uv[3] = {};
    int gd[3];
    for (int a = 0; a < nv; ++a) {
      gd[a] = dofs.dof_of_vertex[mesh.elements[e][a]];
      uv[a] = gd[a] >= 0 ? u[gd[a]] : 0.0;
    }
    auto uh = [&](const Vec2& x) {
      const auto lam = barycentric(mesh, static_cast<int>(e), x);
      return lam[0] * uv[0] + lam[1] * uv[1] + (nv == 3 ? lam[2] * uv[2] : 0.0);
    };
    for (int a = 0; a < nv; ++a) {
      if (gd[a] < 0) continue;
      a_vec[gd[a]] += integrate_element(
          mesh, static_cast<int>(e),
          [&](const Vec2& x) {
            return preset.value(uh(x)) * barycentric(mesh, static_cast<int>(e), x)[a];
          },
          degree);
      for (int b = 0; b < nv; ++b) {
        if (gd[b] < 0) continue;
        trips.emplace_back(gd[a], gd[b],
                           integrate_element(
                               mesh, static_cast<int>(e),
                               [&](const Vec2& x) {
                                 const auto lam = barycentric(mesh, static_cast<int>(e), x);
                                 return preset.deriv(uh(x)) * lam[a] * lam[b];
                               },
                               degree));
      }
    }
  }
  J.setFromTriplets(trips.begin(), trips.end());
  return {a_vec, J};
}

Eigen::VectorXd control_to_load(const SimplicialMesh& mesh, const std::vector<double>& z_elem) {
  if (z_elem.size() != mesh.n_elements())
    throw std::invalid_argument("control_to_load: control size must match element count");
  const DofMap dofs = make_dof_map(mesh);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(dofs.n_dofs());
  const int nv = mesh.n_vertices_per_elem();
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const double w = z_elem[e] * mesh.elem_measure[e] / nv;  // \int_T lambda_a = |T|/(n+1)
    for (int a = 0; a < nv; ++a) {
      const int i = dofs.dof_of_vertex[mesh.elements[e][a]];
      if (i >= 0) F[i] += w;
    }
  }
  return F;
}

FeSystem make_fe_system(std::shared_ptr<const SimplicialMesh> mesh, double s, int workers,
                        const QuadOrders& orders) {
  FeSystem sys;
  sys.mesh = mesh;
  sys.s = s;
  sys.dofs = make_dof_map(*mesh);
  sys.A = assemble_stiffness(*mesh, s, workers, orders);
  sys.M = assemble_mass(*mesh);
  return sys;
}

void dump_matrix_binary(const std::string& path, const Eigen::MatrixXd& A, int n, double s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("dump_matrix_binary: cannot open " + path);
  const std::int32_t n32 = n, N = static_cast<std::int32_t>(A.rows());
  out.write(reinterpret_cast<const char*>(&n32), 4);
  out.write(reinterpret_cast<const char*>(&s), 8);
  out.write(reinterpret_cast<const char*>(&N), 4);
  for (int i = 0; i < A.rows(); ++i)
    out.write(reinterpret_cast<const char*>(A.row(i).eval().data()), 8 * A.cols());
}

}  // namespace fracfem
