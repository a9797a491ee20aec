#include "dilres/atom.hpp"
#include "dilres/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dilres {

namespace {

double hermitian_defect(const CMatrix& m) { return (m - m.adjoint()).norm(); }

double su2_bracket_defect(const std::array<CMatrix, 3>& s, double scale) {
    double worst = 0.0;
    for (int a = 0; a < 3; ++a) {
        const int b = (a + 1) % 3, c = (a + 2) % 3;
        worst = std::max(worst, (s[a] * s[b] - s[b] * s[a] - kI * scale * s[c]).norm());
    }
    return worst;
}

using linalg::kron;

}  // namespace

int OrbitalStructure::orbital_dim() const {
    int d = 0;
    for (int l : orbital_l) d += (l == 1 ? 3 : 1);
    return d;
}

std::vector<Level> cluster_levels(const RVector& e, double tol) {
    std::vector<Level> levels;
    if (e.size() == 0) return levels;
    const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        if (levels.empty() || std::abs(e(i) - levels.back().energy) > tol * scale) {
            levels.push_back({e(i), 0, {}});
        }
        Level& lv = levels.back();
        lv.columns.push_back(static_cast<int>(i));
        lv.multiplicity = static_cast<int>(lv.columns.size());
        double mean = 0.0;
        for (int c : lv.columns) mean += e(c);
        lv.energy = mean / lv.multiplicity;
    }
    return levels;
}

AtomModel::AtomModel(std::string name, CMatrix h_el, std::array<CMatrix, 3> dipole, std::array<CMatrix, 3> spin,
                     std::vector<StateLabel> labels, int n_particles, double spin_value,
                     std::optional<OrbitalStructure> structure)
    : name_(std::move(name)),
      h_el_(std::move(h_el)),
      dipole_(std::move(dipole)),
      spin_(std::move(spin)),
      labels_(std::move(labels)),
      n_particles_(n_particles),
      spin_value_(spin_value),
      structure_(std::move(structure)) {
    const Eigen::Index n = h_el_.rows();
    if (n == 0 || h_el_.cols() != n) throw InvalidArgument("model: h_el must be a nonempty square matrix");
    const double scale = std::max(1.0, h_el_.norm());
    if (hermitian_defect(h_el_) > 1e-12 * scale) throw InvalidArgument("model: h_el is not Hermitian");
    for (int a = 0; a < 3; ++a) {
        if (dipole_[a].size() == 0) dipole_[a] = CMatrix::Zero(n, n);
        if (spin_[a].size() == 0) spin_[a] = CMatrix::Zero(n, n);
        if (dipole_[a].rows() != n || dipole_[a].cols() != n || spin_[a].rows() != n || spin_[a].cols() != n)
            throw InvalidArgument("model: dipole/spin blocks do not match h_el");
        if (hermitian_defect(dipole_[a]) > 1e-12 * std::max(1.0, dipole_[a].norm()))
            throw InvalidArgument("model: dipole component is not Hermitian");
        if (hermitian_defect(spin_[a]) > 1e-12 * std::max(1.0, spin_[a].norm()))
            throw InvalidArgument("model: spin component is not Hermitian");
    }
    const double spin_norm = spin_[0].norm() + spin_[1].norm() + spin_[2].norm();
    if (spin_norm > 0.0) {
        // Pauli convention ([S_a,S_b] = 2i eps S_c) or physical one (= i eps S_c).
        const double tol = 1e-12 * std::max(1.0, spin_norm * spin_norm);
        if (std::min(su2_bracket_defect(spin_, 2.0), su2_bracket_defect(spin_, 1.0)) > tol)
            throw InvalidArgument("model: spin matrices violate the su(2) bracket");
    }
    if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != n)
        throw InvalidArgument("model: label count does not match the dimension");
    if (n_particles_ < 1) throw InvalidArgument("model: n_particles must be positive");
    if (spin_value_ != 0.0 && spin_value_ != 0.5) throw InvalidArgument("model: spin_value must be 0 or 1/2");
    if (structure_) {
        const Eigen::Index factor = spin_value_ == 0.5 ? (Eigen::Index(1) << n_particles_) : 1;
        const CMatrix& b = structure_->to_product;
        if (b.rows() != n || b.cols() != n || structure_->orbital_dim() * factor != n)
            throw InvalidArgument("model: orbital structure does not match the dimension");
        if ((b.adjoint() * b - CMatrix::Identity(n, n)).norm() > 1e-10)
            throw InvalidArgument("model: orbital structure basis change is not unitary");
    }

    Eigen::SelfAdjointEigenSolver<CMatrix> es(h_el_);
    if (es.info() != Eigen::Success) throw NumericalError("model: Hermitian eigensolver failed");
    energies_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
    levels_ = cluster_levels(energies_);
}

CMatrix AtomModel::level_basis(int j) const {
    if (j < 0 || j >= static_cast<int>(levels_.size())) throw InvalidArgument("model: level index out of range");
    const Level& lv = levels_[j];
    CMatrix out(dim(), lv.multiplicity);
    for (int c = 0; c < lv.multiplicity; ++c) out.col(c) = eigenvectors_.col(lv.columns[c]);
    return out;
}

AtomModel AtomModel::perturbed(const CMatrix& delta, const std::string& suffix) const {
    return AtomModel(name_ + suffix, h_el_ + delta, dipole_, spin_, labels_, n_particles_, spin_value_, structure_);
}

// --- builtin models ---------------------------------------------------------

AtomModel toy_two_level(double delta, double d) {
    if (!(delta > 0.0)) throw InvalidArgument("model: toy level spacing must be positive");
    CMatrix h = CMatrix::Zero(2, 2);
    h(1, 1) = delta;
    std::array<CMatrix, 3> dip{CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)};
    dip[2](0, 1) = dip[2](1, 0) = d;
    std::array<CMatrix, 3> spin{CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)};
    OrbitalStructure st;  // two real orbitals without definite l: time reversal only
    st.orbital_l = {-1, -1};
    st.to_product = CMatrix::Identity(2, 2);
    return AtomModel("toy2", h, dip, spin, {{"g", -1, -1, -1, 0}, {"e", -1, -1, -1, 0}}, 1, 0.0, st);
}

AtomModel hydrogen_sp(double Z, double spin_value, double beta, double eps, const RadialGrid* grid) {
    const RadialGrid g0 = grid ? *grid : default_radial_grid(Z, 2, 0);
    RadialGrid g1 = g0;
    g1.l = 1;
    const RadialStates s = hydrogen_levels(Z, 0, 2, g0);
    const RadialStates p = hydrogen_levels(Z, 1, 1, g1);
    const double r1s2p = radial_dipole(s, 0, p, 0);
    const double r2s2p = radial_dipole(s, 1, p, 0);
    const double c_R = beta != 0.0 ? spin_orbit_radial(p, 0, eps) : 0.0;

    // Orbitals: 1s, 2s, 2p_x, 2p_y, 2p_z. The l = 0 and l = 1 oracles agree on
    // the n = 2 energy up to discretization error; the shell shares E_2s.
    const double E1 = s.energies(0), E2 = s.energies(1);
    CMatrix h_orb = CMatrix::Zero(5, 5);
    h_orb(0, 0) = E1;
    for (int i = 1; i < 5; ++i) h_orb(i, i) = E2;
    std::array<CMatrix, 3> d_orb;
    for (int a = 0; a < 3; ++a) {
        d_orb[a] = CMatrix::Zero(5, 5);
        d_orb[a](0, 2 + a) = d_orb[a](2 + a, 0) = r1s2p / std::sqrt(3.0);
        d_orb[a](1, 2 + a) = d_orb[a](2 + a, 1) = r2s2p / std::sqrt(3.0);
    }
    std::vector<StateLabel> orb_labels = {{"1s", 1, 0}, {"2s", 2, 0}, {"2px", 2, 1}, {"2py", 2, 1}, {"2pz", 2, 1}};

    OrbitalStructure st;
    st.orbital_l = {0, 0, 1};
    if (spin_value == 0.0) {
        st.to_product = CMatrix::Identity(5, 5);
        std::array<CMatrix, 3> zero{CMatrix::Zero(5, 5), CMatrix::Zero(5, 5), CMatrix::Zero(5, 5)};
        return AtomModel("hydrogen_sp_s0", h_orb, d_orb, zero, orb_labels, 1, 0.0, st);
    }
    if (spin_value != 0.5) throw InvalidArgument("model: spin_value must be 0 or 1/2");

    const auto sigma = pauli_matrices();
    const CMatrix one2 = CMatrix::Identity(2, 2);
    CMatrix h = kron(h_orb, one2);
    const auto L = p_orbital_angular_momentum();
    for (int a = 0; a < 3; ++a) {
        CMatrix l_full = CMatrix::Zero(5, 5);
        l_full.block(2, 2, 3, 3) = L[a];
        h += beta * c_R * kron(l_full, 0.5 * sigma[a]);
    }
    std::array<CMatrix, 3> dip, spin;
    for (int a = 0; a < 3; ++a) {
        dip[a] = kron(d_orb[a], one2);
        spin[a] = kron(CMatrix::Identity(5, 5), sigma[a]);
    }
    std::vector<StateLabel> labels;
    for (const auto& ol : orb_labels)
        for (const char* sp : {"up", "dn"}) {
            StateLabel l = ol;
            l.name = ol.name + "," + sp;
            l.mj = (std::string(sp) == "up") ? 0.5 : -0.5;
            labels.push_back(l);
        }
    st.to_product = CMatrix::Identity(10, 10);
    return AtomModel("hydrogen_sp", h, dip, spin, labels, 1, 0.5, st);
}

AtomModel fine_structure_model(double Z, double beta, double eps, const RadialGrid& radial, FineStructureData* data) {
    if (std::abs(beta) > 1.0) throw InvalidArgument("model: |beta| above the perturbative threshold 1");
    RadialGrid g0 = radial, g1 = radial;
    g0.l = 0;
    g1.l = 1;
    const RadialStates s = hydrogen_levels(Z, 0, 2, g0);
    const RadialStates p = hydrogen_levels(Z, 1, 1, g1);
    FineStructureData fs;
    fs.c_R = spin_orbit_radial(p, 0, eps);
    fs.E2 = s.energies(1);
    if (data) *data = fs;

    // Product basis (2s, 2p_x, 2p_y, 2p_z) x (up, down).
    const auto sigma = pauli_matrices();
    const auto L = p_orbital_angular_momentum();
    CMatrix h = fs.E2 * CMatrix::Identity(8, 8);
    std::array<CMatrix, 3> dip, spin;
    const double r2s2p = radial_dipole(s, 1, p, 0);
    for (int a = 0; a < 3; ++a) {
        CMatrix l_full = CMatrix::Zero(4, 4);
        l_full.block(1, 1, 3, 3) = L[a];
        h += beta * fs.c_R * kron(l_full, 0.5 * sigma[a]);
        CMatrix d = CMatrix::Zero(4, 4);
        d(0, 1 + a) = d(1 + a, 0) = r2s2p / std::sqrt(3.0);
        dip[a] = kron(d, CMatrix::Identity(2, 2));
        spin[a] = kron(CMatrix::Identity(4, 4), sigma[a]);
    }

    // Coupled basis |l, j, m_j>, ordered (0,1/2), (1,1/2), (1,3/2), m_j ascending.
    const CMatrix ycart = spherical_to_cartesian_p();
    struct Block { int l; double j; };
    const Block blocks[] = {{0, 0.5}, {1, 0.5}, {1, 1.5}};
    CMatrix B = CMatrix::Zero(8, 8);
    std::vector<StateLabel> labels;
    int col = 0;
    for (const Block& bl : blocks) {
        for (double mj = -bl.j; mj <= bl.j + 1e-9; mj += 1.0, ++col) {
            for (int ms2 = 1; ms2 >= -1; ms2 -= 2) {
                const double ms = 0.5 * ms2;
                const int spin_idx = ms2 > 0 ? 0 : 1;
                const double ml = mj - ms;
                if (std::abs(ml) > bl.l + 1e-9) continue;
                const double cg = clebsch_gordan(bl.l, ml, 0.5, ms, bl.j, mj);
                if (bl.l == 0) {
                    B(0 * 2 + spin_idx, col) += cg;
                } else {
                    const int m_index = static_cast<int>(std::lround(1.0 - ml));  // m = 1, 0, -1
                    for (int c = 0; c < 3; ++c) B((1 + c) * 2 + spin_idx, col) += cg * ycart(c, m_index);
                }
            }
            StateLabel lab;
            lab.n = 2;
            lab.l = bl.l;
            lab.j = bl.j;
            lab.mj = mj;
            lab.name = "2" + std::string(bl.l == 0 ? "s" : "p") + (bl.j < 1 ? "1/2" : "3/2") + ",mj=" +
                       std::to_string(static_cast<int>(std::lround(2 * mj))) + "/2";
            labels.push_back(lab);
        }
    }

    const CMatrix Bd = B.adjoint();
    CMatrix hc = Bd * h * B;
    hc = 0.5 * (hc + hc.adjoint()).eval();
    std::array<CMatrix, 3> dc, sc;
    for (int a = 0; a < 3; ++a) {
        dc[a] = Bd * dip[a] * B;
        dc[a] = 0.5 * (dc[a] + dc[a].adjoint()).eval();
        sc[a] = Bd * spin[a] * B;
        sc[a] = 0.5 * (sc[a] + sc[a].adjoint()).eval();
    }
    OrbitalStructure st;
    st.orbital_l = {0, 1};
    st.to_product = B;
    return AtomModel("fine_structure_n2", hc, dc, sc, labels, 1, 0.5, st);
}

// --- gaps and rescaling -----------------------------------------------------

GapData spectral_gap(const std::vector<double>& levels, int j, double margin) {
    if (levels.size() < 2) throw InvalidArgument("gap: spectrum has a single distinct value");
    if (j < 0 || j >= static_cast<int>(levels.size())) throw InvalidArgument("gap: level index out of range");
    GapData g;
    g.j = j;
    g.energy = levels[j];
    g.delta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (static_cast<int>(i) != j) g.delta = std::min(g.delta, std::abs(levels[i] - levels[j]));
    if (!(g.delta > 0.0)) throw InvalidArgument("gap: level is not isolated");
    if (j == 0) {
        g.delta_check = g.delta;
    } else {
        if (!(margin > 0.0 && margin < kPi / 4)) throw InvalidArgument("gap: margin must lie in (0, pi/4)");
        g.margin = margin;
        g.delta_check = g.delta * std::sin(margin) / 2.0;
    }
    g.tau = -std::log(g.delta_check);
    return g;
}

GapData spectral_gap(const AtomModel& model, int j, double margin) {
    std::vector<double> lv;
    for (const Level& l : model.levels()) lv.push_back(l.energy);
    return spectral_gap(lv, j, margin);
}

CMatrix rescaled_atom(const AtomModel& model, const GapData& gap, cplx theta) {
    if (gap.j >= static_cast<int>(model.levels().size())) throw InvalidArgument("gap: level index out of range");
    const cplx f = std::exp(theta) / gap.delta_check;
    return f * (model.h_el() - gap.energy * CMatrix::Identity(model.dim(), model.dim()));
}

// --- serialization ----------------------------------------------------------

nlohmann::json matrix_to_json(const CMatrix& m) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    bool any_imag = false;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
            any_imag = any_imag || m(i, j).imag() != 0.0;
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    if (!any_imag) return re;
    return {{"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const nlohmann::json& j) {
    auto read_real = [](const nlohmann::json& a) {
        if (!a.is_array() || a.empty() || !a[0].is_array()) throw InvalidArgument("model: matrix must be a nested array");
        RMatrix m(a.size(), a[0].size());
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (a[r].size() != a[0].size()) throw InvalidArgument("model: ragged matrix rows");
            for (std::size_t c = 0; c < a[r].size(); ++c) m(r, c) = a[r][c].get<double>();
        }
        return m;
    };
    if (j.is_object()) {
        const RMatrix re = read_real(j.at("re"));
        RMatrix im = RMatrix::Zero(re.rows(), re.cols());
        if (j.contains("im")) im = read_real(j.at("im"));
        if (im.rows() != re.rows() || im.cols() != re.cols()) throw InvalidArgument("model: re/im shapes differ");
        CMatrix m(re.rows(), re.cols());
        m.real() = re;
        m.imag() = im;
        return m;
    }
    return read_real(j).cast<cplx>();
}

nlohmann::json to_json(const AtomModel& model) {
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& l : model.labels())
        labels.push_back({{"name", l.name}, {"n", l.n}, {"l", l.l}, {"j", l.j}, {"mj", l.mj}});
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& lv : model.levels()) levels.push_back({{"energy", lv.energy}, {"multiplicity", lv.multiplicity}});
    nlohmann::json out = {{"name", model.name()},
                          {"units", "4Ry=1"},
                          {"h_el", matrix_to_json(model.h_el())},
                          {"dipole", {matrix_to_json(model.dipole()[0]), matrix_to_json(model.dipole()[1]),
                                      matrix_to_json(model.dipole()[2])}},
                          {"spin", {matrix_to_json(model.spin()[0]), matrix_to_json(model.spin()[1]),
                                    matrix_to_json(model.spin()[2])}},
                          {"labels", labels},
                          {"levels", levels},
                          {"n_particles", model.n_particles()},
                          {"spin_value", model.spin_value()}};
    if (model.structure())
        out["structure"] = {{"orbital_l", model.structure()->orbital_l},
                            {"to_product", matrix_to_json(model.structure()->to_product)}};
    return out;
}

AtomModel atom_from_json(const nlohmann::json& j) {
    try {
        if (j.contains("units") && j.at("units").get<std::string>() != "4Ry=1")
            throw InvalidArgument("model: units must be \"4Ry=1\"");
        const CMatrix h = matrix_from_json(j.at("h_el"));
        std::array<CMatrix, 3> dip, spin;
        for (int a = 0; a < 3; ++a) {
            dip[a] = j.contains("dipole") ? matrix_from_json(j.at("dipole").at(a)) : CMatrix::Zero(h.rows(), h.cols());
            spin[a] = j.contains("spin") ? matrix_from_json(j.at("spin").at(a)) : CMatrix::Zero(h.rows(), h.cols());
        }
        std::vector<StateLabel> labels;
        if (j.contains("labels"))
            for (const auto& l : j.at("labels")) {
                StateLabel s;
                if (l.is_string()) {
                    s.name = l.get<std::string>();
                } else {
                    s.name = l.value("name", std::string());
                    s.n = l.value("n", -1);
                    s.l = l.value("l", -1);
                    s.j = l.value("j", -1.0);
                    s.mj = l.value("mj", 0.0);
                }
                labels.push_back(s);
            }
        std::optional<OrbitalStructure> st;
        if (j.contains("structure")) {
            OrbitalStructure o;
            o.orbital_l = j.at("structure").at("orbital_l").get<std::vector<int>>();
            o.to_product = j.at("structure").contains("to_product")
                               ? matrix_from_json(j.at("structure").at("to_product"))
                               : CMatrix::Identity(h.rows(), h.cols());
            st = o;
        }
        return AtomModel(j.value("name", std::string("user")), h, dip, spin, labels, j.value("n_particles", 1),
                         j.value("spin_value", 0.0), st);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("model: malformed JSON (") + e.what() + ")");
    }
}

}  // namespace dilres
