#include "hessquot/grid.hpp"

#include <cmath>

namespace hessquot {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Grid::Grid(const Domain& dom, int n_radial, int n_angular)
    : dom_(dom), ball_(dom.kind() == DomainKind::ball), nr_(n_radial), nth_(n_angular) {
    if (dom.kind() == DomainKind::superellipse)
        throw std::invalid_argument("Grid: no boundary-fitted chart for superellipse domains");
    if (nr_ < 4) throw std::invalid_argument("Grid: need at least 4 radial rings");
    if (nth_ < 8) throw std::invalid_argument("Grid: need at least 8 angular nodes");

    if (ball_) {
        a_ = 1.0;
        b_ = 1.0;
        rho_max_ = dom.semi_axis_a();
        hth_ = kPi / nth_;
        n_nodes_ = 1 + nr_ * (nth_ + 1);
    } else {
        a_ = dom.semi_axis_a();
        b_ = dom.semi_axis_b();
        rho_max_ = 1.0;
        hth_ = 2.0 * kPi / nth_;
        n_nodes_ = 1 + nr_ * nth_;
    }
    hr_ = rho_max_ / nr_;

    // Angular stencils fitted to Fourier modes m = 1, 2.
    {
        const double h = hth_;
        const double a11 = 2.0 * std::sin(h), a12 = 2.0 * std::sin(2.0 * h);
        const double a21 = 2.0 * std::sin(2.0 * h), a22 = 2.0 * std::sin(4.0 * h);
        const double det = a11 * a22 - a12 * a21;
        d1_alpha_ = (1.0 * a22 - 2.0 * a12) / det;
        d1_beta_ = (2.0 * a11 - 1.0 * a21) / det;

        const double b11 = 2.0 * (std::cos(h) - 1.0), b12 = 2.0 * (std::cos(2.0 * h) - 1.0);
        const double b21 = 2.0 * (std::cos(2.0 * h) - 1.0), b22 = 2.0 * (std::cos(4.0 * h) - 1.0);
        const double bdet = b11 * b22 - b12 * b21;
        d2_a_ = (-1.0 * b22 + 4.0 * b12) / bdet;
        d2_b_ = (-4.0 * b11 + 1.0 * b21) / bdet;
        d2_w0_ = -2.0 * (d2_a_ + d2_b_);
    }

    volume_ = 0.0;
    for (int node = 0; node < n_nodes_; ++node) volume_ += quad_weight(node);
}

int Grid::node_index(int i, int j) const {
    if (i == 0) return 0;
    if (ball_) {
        if (j < 0) j = -j;
        if (j > nth_) j = 2 * nth_ - j;
        return 1 + (i - 1) * (nth_ + 1) + j;
    }
    j %= nth_;
    if (j < 0) j += nth_;
    return 1 + (i - 1) * nth_ + j;
}

std::pair<int, int> Grid::node_coords(int node) const {
    if (node == 0) return {0, 0};
    const int stride = ball_ ? nth_ + 1 : nth_;
    const int rest = node - 1;
    return {1 + rest / stride, rest % stride};
}

bool Grid::is_boundary(int node) const { return node_coords(node).first == nr_; }

Eigen::VectorXd Grid::position(int node) const {
    const auto [i, j] = node_coords(node);
    const double rho = i * hr_;
    const double th = j * hth_;
    if (ball_) {
        Eigen::Vector3d p(rho * std::sin(th), 0.0, rho * std::cos(th));
        return p;
    }
    return Eigen::Vector2d(a_ * rho * std::cos(th), b_ * rho * std::sin(th));
}

Eigen::VectorXd Grid::boundary_normal(int node) const {
    const auto [i, j] = node_coords(node);
    if (i != nr_) throw std::invalid_argument("Grid::boundary_normal: not a boundary node");
    const double th = j * hth_;
    if (ball_) return Eigen::Vector3d(std::sin(th), 0.0, std::cos(th));
    Eigen::Vector2d nu(std::cos(th) / a_, std::sin(th) / b_);
    return nu / nu.norm();
}

double Grid::quad_weight(int node) const {
    const auto [i, j] = node_coords(node);
    const double rho = i * hr_;
    const double th = j * hth_;
    if (ball_) {
        double w = 2.0 * kPi * rho * rho * std::sin(th) * hr_ * hth_;
        if (i == 0 || i == nr_) w *= 0.5;
        if (j == 0 || j == nth_) w *= 0.5;
        return w;
    }
    double w = a_ * b_ * rho * hr_ * hth_;
    if (i == 0 || i == nr_) w *= 0.5;
    return w;
}

void Grid::accumulate(Stencil& s, int node, double w) const {
    for (auto& e : s) {
        if (e.first == node) {
            e.second += w;
            return;
        }
    }
    s.emplace_back(node, w);
}

void Grid::chart_ops(int i, int j, ChartOps& ops) const {
    ops.d1r.clear();
    ops.d2r.clear();
    ops.d1t.clear();
    ops.d2t.clear();
    ops.d1rt.clear();

    // radial offsets/weights
    std::vector<std::pair<int, double>> r1, r2;
    if (i == nr_) {
        r1 = {{i, 3.0 / (2.0 * hr_)}, {i - 1, -4.0 / (2.0 * hr_)}, {i - 2, 1.0 / (2.0 * hr_)}};
        r2 = {{i, 2.0 / (hr_ * hr_)},
              {i - 1, -5.0 / (hr_ * hr_)},
              {i - 2, 4.0 / (hr_ * hr_)},
              {i - 3, -1.0 / (hr_ * hr_)}};
    } else {
        r1 = {{i + 1, 1.0 / (2.0 * hr_)}, {i - 1, -1.0 / (2.0 * hr_)}};
        r2 = {{i + 1, 1.0 / (hr_ * hr_)}, {i, -2.0 / (hr_ * hr_)}, {i - 1, 1.0 / (hr_ * hr_)}};
    }
    const std::pair<int, double> t1[] = {
        {1, d1_alpha_}, {-1, -d1_alpha_}, {2, d1_beta_}, {-2, -d1_beta_}};
    const std::pair<int, double> t2[] = {
        {0, d2_w0_}, {1, d2_a_}, {-1, d2_a_}, {2, d2_b_}, {-2, d2_b_}};

    // the fitted angular weights already carry their 1/h scaling
    for (const auto& [ri, rw] : r1) accumulate(ops.d1r, node_index(ri, j), rw);
    for (const auto& [ri, rw] : r2) accumulate(ops.d2r, node_index(ri, j), rw);
    for (const auto& [dt, tw] : t1) accumulate(ops.d1t, node_index(i, j + dt), tw);
    for (const auto& [dt, tw] : t2) accumulate(ops.d2t, node_index(i, j + dt), tw);
    for (const auto& [dt, tw] : t1)
        for (const auto& [ri, rw] : r1)
            accumulate(ops.d1rt, node_index(ri, j + dt), rw * tw);
}

void Grid::combine(const ChartOps& ops, const double* coeff, Stencil& out) const {
    out.clear();
    const Stencil* parts[5] = {&ops.d1r, &ops.d2r, &ops.d1t, &ops.d2t, &ops.d1rt};
    for (int p = 0; p < 5; ++p) {
        if (coeff[p] == 0.0) continue;
        for (const auto& [node, w] : *parts[p]) accumulate(out, node, coeff[p] * w);
    }
}

void Grid::hessian_term_slot(int term, int& row, int& col, double& factor) const {
    if (!ball_) {
        switch (term) {
            case 0: row = 0; col = 0; factor = 1.0; return;  // xx
            case 1: row = 0; col = 1; factor = 2.0; return;  // xy
            case 2: row = 1; col = 1; factor = 1.0; return;  // yy
        }
    } else {
        switch (term) {
            case 0: row = 0; col = 0; factor = 1.0; return;  // ss
            case 1: row = 0; col = 2; factor = 2.0; return;  // sz
            case 2: row = 2; col = 2; factor = 1.0; return;  // zz
            case 3: row = 1; col = 1; factor = 1.0; return;  // azimuthal
        }
    }
    throw std::invalid_argument("Grid::hessian_term_slot: bad term");
}

void Grid::pole_hessian_stencil(int term, Stencil& out) const {
    out.clear();
    const double h2 = hr_ * hr_;
    if (!ball_) {
        // ring Fourier fit: H_xx = 2(mean - u0 + A2)/(h^2 a^2), etc.
        for (int j = 0; j < nth_; ++j) {
            const double th = j * hth_;
            double w = 0.0;
            switch (term) {
                case 0: w = 2.0 * (1.0 + 2.0 * std::cos(2.0 * th)) / (nth_ * h2 * a_ * a_); break;
                case 1: w = 4.0 * std::sin(2.0 * th) / (nth_ * h2 * a_ * b_); break;
                case 2: w = 2.0 * (1.0 - 2.0 * std::cos(2.0 * th)) / (nth_ * h2 * b_ * b_); break;
            }
            accumulate(out, node_index(1, j), w);
        }
    } else {
        if (term == 1) return;  // the mixed meridian entry vanishes at the center
        for (int j = 0; j <= nth_; ++j) {
            const double th = j * hth_;
            const double tau = (j == 0 || j == nth_) ? 0.5 : 1.0;
            const double c2 = std::cos(2.0 * th);
            double w = 0.0;
            if (term == 2)  // zz
                w = 2.0 * tau * (1.0 + 2.0 * c2) / (nth_ * h2);
            else  // ss and azimuthal share the transverse value
                w = 2.0 * tau * (1.0 - 2.0 * c2) / (nth_ * h2);
            accumulate(out, node_index(1, j), w);
        }
    }
    double sum = 0.0;
    for (const auto& [node, w] : out) sum += w;
    accumulate(out, 0, -sum);
}

void Grid::pole_gradient_stencil(int axis, Stencil& out) const {
    out.clear();
    if (!ball_) {
        for (int j = 0; j < nth_; ++j) {
            const double th = j * hth_;
            const double w = (axis == 0) ? 2.0 * std::cos(th) / (nth_ * hr_ * a_)
                                         : 2.0 * std::sin(th) / (nth_ * hr_ * b_);
            accumulate(out, node_index(1, j), w);
        }
    } else {
        if (axis != 2) return;  // the center gradient of an axisymmetric field is axial
        for (int j = 0; j <= nth_; ++j) {
            const double tau = (j == 0 || j == nth_) ? 0.5 : 1.0;
            accumulate(out, node_index(1, j), 2.0 * tau * std::cos(j * hth_) / (nth_ * hr_));
        }
    }
    double sum = 0.0;
    for (const auto& [node, w] : out) sum += w;
    accumulate(out, 0, -sum);
}

void Grid::azimuthal_term_stencil(int i, int j, Stencil& out) const {
    // lambda_phi = u_s / s = u_r / r + cot(th) u_th / r^2, with the even
    // reflection giving u_th -> u_thth at the axis.
    ChartOps ops;
    chart_ops(i, j, ops);
    out.clear();
    const double rho = i * hr_;
    const bool axis = (j == 0 || j == nth_);
    const double c_d1r = 1.0 / rho;
    for (const auto& [node, w] : ops.d1r) accumulate(out, node, c_d1r * w);
    if (axis) {
        const double c_d2t = 1.0 / (rho * rho);
        for (const auto& [node, w] : ops.d2t) accumulate(out, node, c_d2t * w);
    } else {
        const double th = j * hth_;
        const double c_d1t = std::cos(th) / (std::sin(th) * rho * rho);
        for (const auto& [node, w] : ops.d1t) accumulate(out, node, c_d1t * w);
    }
}

void Grid::hessian_term_stencil(int node, int term, Stencil& out) const {
    const auto [i, j] = node_coords(node);
    if (i == 0) {
        pole_hessian_stencil(term, out);
        return;
    }
    if (ball_ && term == 3) {
        azimuthal_term_stencil(i, j, out);
        return;
    }
    const double rho = i * hr_;
    const double th = j * hth_;
    const double c = std::cos(th), s = std::sin(th);
    const double rx = c / a_, ry = s / b_;
    const double tx = -s / (a_ * rho), ty = c / (b_ * rho);
    const double rxx = s * s / (a_ * a_ * rho);
    const double rxy = -s * c / (a_ * b_ * rho);
    const double ryy = c * c / (b_ * b_ * rho);
    const double txx = 2.0 * c * s / (a_ * a_ * rho * rho);
    const double txy = (s * s - c * c) / (a_ * b_ * rho * rho);
    const double tyy = -2.0 * c * s / (b_ * b_ * rho * rho);

    ChartOps ops;
    chart_ops(i, j, ops);
    // coeff order: {d1r, d2r, d1t, d2t, d1rt}
    double coeff[5];
    // The ball's meridian plane is the polar chart with "x" = z, "y" = s.
    int t = term;
    if (ball_) t = (term == 0) ? 2 : (term == 1 ? 1 : 0);
    switch (t) {
        case 0:  // xx
            coeff[0] = rxx; coeff[1] = rx * rx; coeff[2] = txx; coeff[3] = tx * tx;
            coeff[4] = 2.0 * rx * tx;
            break;
        case 1:  // xy
            coeff[0] = rxy; coeff[1] = rx * ry; coeff[2] = txy; coeff[3] = tx * ty;
            coeff[4] = rx * ty + ry * tx;
            break;
        case 2:  // yy
            coeff[0] = ryy; coeff[1] = ry * ry; coeff[2] = tyy; coeff[3] = ty * ty;
            coeff[4] = 2.0 * ry * ty;
            break;
        default:
            throw std::invalid_argument("Grid::hessian_term_stencil: bad term");
    }
    combine(ops, coeff, out);
}

void Grid::gradient_stencil(int node, int axis, Stencil& out) const {
    if (axis < 0 || axis >= dim()) throw std::invalid_argument("Grid::gradient_stencil: bad axis");
    const auto [i, j] = node_coords(node);
    if (i == 0) {
        pole_gradient_stencil(axis, out);
        return;
    }
    out.clear();
    if (ball_ && axis == 1) return;  // azimuthal gradient component vanishes
    const double rho = i * hr_;
    const double th = j * hth_;
    const double c = std::cos(th), s = std::sin(th);
    ChartOps ops;
    chart_ops(i, j, ops);
    double cr, ct;
    int ax = axis;
    if (ball_) ax = (axis == 0) ? 1 : 0;  // s is the "y" of the meridian chart
    if (ax == 0) {
        cr = c / a_;
        ct = -s / (a_ * rho);
    } else {
        cr = s / b_;
        ct = c / (b_ * rho);
    }
    for (const auto& [n2, w] : ops.d1r) accumulate(out, n2, cr * w);
    for (const auto& [n2, w] : ops.d1t) accumulate(out, n2, ct * w);
}

void Grid::normal_derivative_stencil(int node, Stencil& out) const {
    const Eigen::VectorXd nu = boundary_normal(node);
    out.clear();
    Stencil g;
    for (int axis = 0; axis < dim(); ++axis) {
        if (nu[axis] == 0.0) continue;
        gradient_stencil(node, axis, g);
        for (const auto& [n2, w] : g) accumulate(out, n2, nu[axis] * w);
    }
}

double Grid::apply(const Stencil& s, const Eigen::VectorXd& u, int center) const {
    const double uc = u[center];
    double acc = 0.0;
    for (const auto& [node, w] : s) acc += w * (u[node] - uc);
    return acc;
}

SymMatrix Grid::hessian(const Eigen::VectorXd& u, int node) const {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim(), dim());
    Stencil s;
    for (int t = 0; t < hessian_terms(); ++t) {
        hessian_term_stencil(node, t, s);
        int r, c;
        double factor;
        hessian_term_slot(t, r, c, factor);
        const double v = apply(s, u, node);
        H(r, c) = v;
        H(c, r) = v;
    }
    return SymMatrix(std::move(H));
}

Eigen::VectorXd Grid::gradient(const Eigen::VectorXd& u, int node) const {
    Eigen::VectorXd g(dim());
    Stencil s;
    for (int axis = 0; axis < dim(); ++axis) {
        gradient_stencil(node, axis, s);
        g[axis] = apply(s, u, node);
    }
    return g;
}

double Grid::normal_derivative(const Eigen::VectorXd& u, int node) const {
    Stencil s;
    normal_derivative_stencil(node, s);
    return apply(s, u, node);
}

Eigen::VectorXd Grid::sample(const std::function<double(const Eigen::VectorXd&)>& f) const {
    Eigen::VectorXd v(n_nodes_);
    for (int node = 0; node < n_nodes_; ++node) v[node] = f(position(node));
    return v;
}

}  // namespace hessquot
