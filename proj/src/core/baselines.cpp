// Copyright 2026 The vvbo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace vvbo {

ScalarGP::ScalarGP(VectorKernel kernel, double lambda, CrossKernel cross)
    : kernel_(std::move(kernel)), cross_(std::move(cross)), lambda_(lambda) {
    if (!kernel_) throw InputError("ScalarGP needs a kernel");
    if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw InputError("ScalarGP needs lambda > 0");
}

void ScalarGP::clear() {
    X_.clear();
    y_.resize(0);
    L_.resize(0, 0);
    alpha_.resize(0);
}

void ScalarGP::update(const Eigen::VectorXd& x, double y) {
    if (!std::isfinite(y) || !x.allFinite()) throw InputError("ScalarGP::update: non-finite input");
    const Eigen::Index t = size();
    Eigen::VectorXd k(t);
    for (Eigen::Index i = 0; i < t; ++i) k(i) = kernel_(X_[static_cast<std::size_t>(i)], x);
    const double kself = kernel_(x, x) + lambda_;

    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(t + 1, t + 1);
    double d2 = kself;
    if (t > 0) {
        L.topLeftCorner(t, t) = L_;
        const Eigen::VectorXd l = L_.triangularView<Eigen::Lower>().solve(k);
        L.block(t, 0, 1, t) = l.transpose();
        d2 -= l.squaredNorm();
    }
    // Exact arithmetic gives d2 >= lambda.
    L(t, t) = std::sqrt(std::max(d2, lambda_ * 1e-12));
    L_ = std::move(L);

    X_.push_back(x);
    y_.conservativeResize(t + 1);
    y_(t) = y;
    alpha_ = L_.triangularView<Eigen::Lower>().solve(y_);
    L_.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha_);
}

ScalarGP::Prediction ScalarGP::predict(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd row = x.transpose();
    const Batch b = predict(row);
    return {b.mean(0), b.variance(0)};
}

ScalarGP::Batch ScalarGP::predict(const Eigen::MatrixXd& candidates) const {
    const Eigen::Index n = candidates.rows();
    Batch out;
    out.variance.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd c = candidates.row(i).transpose();
        out.variance(i) = kernel_(c, c);
    }
    if (X_.empty()) {
        out.mean = Eigen::VectorXd::Zero(n);
        return out;
    }
    Eigen::MatrixXd Kc;
    if (cross_) {
        Kc = cross_(candidates, X_);
    } else {
        Kc.resize(n, size());
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::VectorXd c = candidates.row(i).transpose();
            for (int j = 0; j < size(); ++j) Kc(i, j) = kernel_(c, X_[static_cast<std::size_t>(j)]);
        }
    }
    out.mean = Kc * alpha_;
    const Eigen::MatrixXd V = L_.triangularView<Eigen::Lower>().solve(Kc.transpose());
    out.variance -= V.colwise().squaredNorm().transpose();
    out.variance = out.variance.cwiseMax(0.0);
    return out;
}

double ScalarGP::log_det() const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < L_.rows(); ++i) s += 2.0 * std::log(L_(i, i)) - std::log(lambda_);
    return s;
}

double AugmentedKernel::operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    const int d = input_dim();
    const int c = context_dim();
    if (a.size() != d + c || b.size() != d + c) throw InputError("AugmentedKernel: input length mismatch");
    return base(a.head(d), b.head(d)) * a.tail(c).dot(B * b.tail(c));
}

VectorKernel AugmentedKernel::as_function() const {
    return [k = *this](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return k(a, b); };
}

CrossKernel AugmentedKernel::as_cross() const {
    return [k = *this](const Eigen::MatrixXd& cand, const std::vector<Eigen::VectorXd>& X) {
        const int d = k.input_dim();
        const int c = k.context_dim();
        PointList xs;
        xs.reserve(X.size());
        Eigen::MatrixXd ctx(c, static_cast<Eigen::Index>(X.size()));
        for (std::size_t j = 0; j < X.size(); ++j) {
            xs.push_back(X[j].head(d));
            ctx.col(static_cast<Eigen::Index>(j)) = X[j].tail(c);
        }
        const Eigen::MatrixXd G = cross_gram_rows(k.base, cand.leftCols(d), xs);
        const Eigen::MatrixXd C = cand.rightCols(c) * (k.B * ctx);
        return Eigen::MatrixXd(G.cwiseProduct(C));
    };
}

Method parse_method(std::string_view name) {
    if (name == "vvbo") return Method::VVBO;
    if (name == "bo") return Method::BO;
    if (name == "rbo") return Method::RBO;
    if (name == "mtbo") return Method::MTBO;
    if (name == "rmtbo") return Method::RMTBO;
    if (name == "ctbo") return Method::CTBO;
    if (name == "ffbo") return Method::FFBO;
    throw InputError("unknown method '" + std::string(name) + "'");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::VVBO: return "vvbo";
        case Method::BO: return "bo";
        case Method::RBO: return "rbo";
        case Method::MTBO: return "mtbo";
        case Method::RMTBO: return "rmtbo";
        case Method::CTBO: return "ctbo";
        case Method::FFBO: return "ffbo";
    }
    return "unknown";
}

Regime parse_regime(std::string_view name) {
    if (name == "full" || name == "identity") return Regime::Full;
    if (name == "partial" || name == "projection") return Regime::Partial;
    if (name == "scalar") return Regime::Scalar;
    throw InputError("unknown observation regime '" + std::string(name) + "'");
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::Full: return "full";
        case Regime::Partial: return "partial";
        case Regime::Scalar: return "scalar";
    }
    return "unknown";
}

BenchmarkSetup BenchmarkSetup::defaults(BenchmarkId id) {
    const auto d = benchmark_defaults(id);
    BenchmarkSetup s;
    s.id = id;
    s.input_length_scale = d.input_length_scale;
    s.output_length_scale = d.output_length_scale;
    s.lambda = d.lambda;
    s.noise_std = d.noise_std;
    return s;
}

namespace {

std::vector<double> point_eval_locations(const PhaseSchedule& s) {
    std::vector<double> ts;
    for (const auto& p : s.phases)
        for (const auto& f : p.basis)
            if (f.kind == FunctionalDescriptor::Kind::PointEval &&
                std::find(ts.begin(), ts.end(), f.t) == ts.end())
                ts.push_back(f.t);
    return ts;
}

}  // namespace

StructuredProblem::StructuredProblem(const BenchmarkSetup& setup)
    : setup_(setup),
      op_(TestOperator::make(setup.id, setup.benchmark_seed)),
      input_kernel_(ScalarKernel::isotropic(setup.input_family, setup.input_length_scale,
                                            op_.x_domain().dim(), 1.0, setup.input_nu)) {
    if (setup_.n_grid < 2) throw ConfigError("n_grid must be at least 2");
    if (!(setup_.lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (!(setup_.noise_std >= 0.0)) throw ConfigError("noise_std must be nonnegative");
    if (setup_.schedule) {
        const auto d = benchmark_defaults(setup_.id);
        grid_ = std::make_shared<const OutputGrid>(
            OutputGrid::grid_points(d.t_lo, d.t_hi, setup_.n_grid, point_eval_locations(*setup_.schedule)),
            ScalarKernel::isotropic(KernelFamily::RBF, setup_.output_length_scale, 1), setup_.fit_reg);
        schedule_ = *setup_.schedule;
    } else {
        grid_ = make_benchmark_grid(setup_.id, setup_.n_grid, setup_.fit_reg, setup_.output_length_scale);
        schedule_ = table_schedule(setup_.id, *grid_, setup_.benchmark_seed, setup_.iterations_per_phase);
    }
    if (schedule_.phases.empty()) throw ConfigError("schedule has no phases");
    for (const auto& p : schedule_.phases) {
        if (p.iterations < 0) throw ConfigError("phase iteration counts must be nonnegative");
        if (p.weights.size() != static_cast<Eigen::Index>(p.basis.size()))
            throw ConfigError("phase weights must match the basis size");
    }
    sample_map_ = sample_to_canonical(*grid_);
    for (int i = 1; i <= num_phases(); ++i) {
        phases_.push_back(phase_objective(schedule_, i, grid_));
        phase_canon_.push_back(phases_.back().m.canonical());
    }
    compute_optima();
}

const PhaseObjective& StructuredProblem::phase(int i) const {
    if (i < 1 || i > num_phases()) throw InputError("phase index out of range");
    return phases_[static_cast<std::size_t>(i - 1)];
}

const Eigen::VectorXd& StructuredProblem::phase_canonical(int i) const {
    if (i < 1 || i > num_phases()) throw InputError("phase index out of range");
    return phase_canon_[static_cast<std::size_t>(i - 1)];
}

double StructuredProblem::optimum(int i) const {
    if (i < 1 || i > num_phases()) throw InputError("phase index out of range");
    return optima_[static_cast<std::size_t>(i - 1)];
}

const Point& StructuredProblem::argmax(int i) const {
    if (i < 1 || i > num_phases()) throw InputError("phase index out of range");
    return argmax_[static_cast<std::size_t>(i - 1)];
}

Eigen::VectorXd StructuredProblem::canonical(const Point& x) const {
    return sample_map_ * op_.trajectory(x, grid_->points());
}

Eigen::VectorXd StructuredProblem::noisy_canonical(const Point& x, Rng& rng) const {
    if (!domain().contains(x, 1e-12)) throw InputError("query outside the input domain");
    Eigen::VectorXd samples = op_.trajectory(x, grid_->points());
    if (setup_.noise_std > 0.0) {
        std::normal_distribution<double> noise(0.0, setup_.noise_std);
        for (Eigen::Index j = 0; j < samples.size(); ++j) samples(j) += noise(rng);
    }
    return sample_map_ * samples;
}

double StructuredProblem::objective(const Point& x, int phase) const {
    return phase_canonical(phase).dot(canonical(x));
}

void StructuredProblem::compute_optima() {
    const int d = domain().dim();
    const int res = (oracle_resolution(d) - 1) * std::max(1, setup_.oracle_refine) + 1;
    const Eigen::MatrixXd pts = lattice(domain(), std::vector<int>(static_cast<std::size_t>(d), res));
    const int P = num_phases();
    Eigen::MatrixXd Cm(grid_->rank(), P);
    for (int i = 0; i < P; ++i) Cm.col(i) = phase_canon_[static_cast<std::size_t>(i)];
    // Trajectory weights per phase: F_i(x) = a_i . samples(x).
    const Eigen::MatrixXd A = sample_map_.transpose() * Cm;

    optima_.assign(static_cast<std::size_t>(P), -std::numeric_limits<double>::infinity());
    argmax_.assign(static_cast<std::size_t>(P), pts.row(0).transpose());
    const Eigen::Index chunk = 4096;
    Eigen::MatrixXd traj;
    for (Eigen::Index start = 0; start < pts.rows(); start += chunk) {
        const Eigen::Index len = std::min(chunk, pts.rows() - start);
        traj.resize(len, grid_->size());
        for (Eigen::Index i = 0; i < len; ++i) {
            traj.row(i) = op_.trajectory(pts.row(start + i).transpose(), grid_->points()).transpose();
        }
        const Eigen::MatrixXd vals = traj * A;
        for (int p = 0; p < P; ++p) {
            for (Eigen::Index i = 0; i < len; ++i) {
                if (vals(i, p) > optima_[static_cast<std::size_t>(p)]) {
                    optima_[static_cast<std::size_t>(p)] = vals(i, p);
                    argmax_[static_cast<std::size_t>(p)] = pts.row(start + i).transpose();
                }
            }
        }
    }
}

int active_phases(const StructuredProblem& problem, Regime regime) {
    const auto& phases = problem.schedule().phases;
    if (regime == Regime::Scalar) return 1;
    if (regime == Regime::Full) return static_cast<int>(phases.size());
    int n = 1;
    while (n < static_cast<int>(phases.size()) && same_basis(phases[0], phases[static_cast<std::size_t>(n)])) ++n;
    return n;
}

int horizon(const StructuredProblem& problem, Regime regime) {
    int T = 0;
    for (int i = 0; i < active_phases(problem, regime); ++i)
        T += problem.schedule().phases[static_cast<std::size_t>(i)].iterations;
    return T;
}

void apply_regret(RegretTrace& trace, const std::vector<double>& optima) {
    RegretBook book;
    for (auto& r : trace) {
        if (r.phase < 1 || r.phase > static_cast<int>(optima.size()))
            throw ConfigError("no oracle value for phase " + std::to_string(r.phase));
        std::tie(r.simple_regret, r.cumulative_regret) =
            book.add(r.phase, optima[static_cast<std::size_t>(r.phase - 1)], r.f_value);
    }
}

namespace {

std::optional<double> phase_beta(const BetaConfig& cfg, const StructuredProblem& p, int phase) {
    switch (cfg.source) {
        case BetaConfig::Source::Table: return p.phase(phase).beta;
        case BetaConfig::Source::Fixed: return cfg.value;
        case BetaConfig::Source::Theoretical: return std::nullopt;
    }
    return std::nullopt;
}

/// Phase of a 1-based iteration, restricted to the first `n_phases` phases.
std::vector<int> phase_labels(const StructuredProblem& p, int n_phases) {
    std::vector<int> labels;
    for (int i = 1; i <= n_phases; ++i)
        labels.insert(labels.end(), static_cast<std::size_t>(p.schedule().phases[static_cast<std::size_t>(i - 1)].iterations), i);
    return labels;
}

struct Segment {
    int first_iteration = 1;  // 1-based, global
    int length = 0;
    MeasurementOperator M;
    std::function<LinearObjective(int phase, const InducedSpectrum&)> objective;
};

MeasurementOperator projection_for(const StructuredProblem& p, int phase) {
    return MeasurementOperator::projection(p.phase(phase).basis);
}

RegretTrace run_engine_segments(const StructuredProblem& p, const std::vector<Segment>& segments,
                                const std::vector<int>& labels, const MethodOptions& opts, Rng& rng) {
    RegretTrace all;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const Segment& seg = segments[s];
        if (seg.length == 0) continue;
        const Eigen::MatrixXd B = Eigen::MatrixXd::Identity(p.grid()->rank(), p.grid()->rank());
        const InducedSpectrum spectrum = induced_operator(seg.M, B, opts.truncation);
        const bool identity = seg.M.kind() == MeasurementKind::Identity;
        const Eigen::MatrixXd A = seg.M.matrix_canon();
        const Eigen::MatrixXd to_basis = spectrum.eigvecs.transpose() * A;

        Problem prob{p.domain(),
                     [&](const Point& x, Rng& r) -> Eigen::VectorXd {
                         const Eigen::VectorXd c = p.noisy_canonical(x, r);
                         if (identity) return spectrum.eigvecs.transpose() * c;
                         return to_basis * c;
                     },
                     [&](const Point& x, int phase) { return p.objective(x, phase); },
                     [&](int phase) { return p.optimum(phase); }};

        PosteriorHyperparams hyper;
        hyper.lambda = p.setup().lambda;
        hyper.gamma = opts.beta.gamma;
        hyper.sigma = opts.beta.sigma;
        hyper.zeta = opts.beta.zeta;
        Posterior state(p.input_kernel(), spectrum, hyper);

        std::vector<LinearObjective> per_phase(static_cast<std::size_t>(p.num_phases() + 1));
        for (int t = 0; t < seg.length; ++t) {
            const int ph = labels[static_cast<std::size_t>(seg.first_iteration - 1 + t)];
            if (per_phase[static_cast<std::size_t>(ph)].mbar.size() == 0)
                per_phase[static_cast<std::size_t>(ph)] = seg.objective(ph, spectrum);
        }
        const std::function<ScheduleStep(int)> schedule = [&](int t) {
            const int ph = labels[static_cast<std::size_t>(seg.first_iteration - 1 + t - 1)];
            return ScheduleStep{ph, per_phase[static_cast<std::size_t>(ph)], phase_beta(opts.beta, p, ph)};
        };
        LoopOptions lo{opts.optimizer, opts.run_id, opts.random_first_query};
        RegretTrace part = run_tv_vvbo(prob, seg.length, schedule, std::move(state), lo, rng);
        for (auto& r : part) {
            r.iteration += seg.first_iteration - 1;
            all.push_back(std::move(r));
        }
    }
    return all;
}

LinearObjective weights_objective(const MeasurementOperator& M, const Eigen::VectorXd& w,
                                  const InducedSpectrum& spectrum) {
    const FunctionalCoords fc = functional_coords(M, w, spectrum);
    return {fc.mbar, fc.m_norm};
}

RegretTrace run_engine_method(const StructuredProblem& p, const MethodOptions& opts, Rng& rng) {
    const int P = active_phases(p, opts.regime);
    const std::vector<int> labels = phase_labels(p, P);
    const int T = static_cast<int>(labels.size());
    std::vector<Segment> segments;

    switch (opts.method) {
        case Method::VVBO: {
            if (opts.regime == Regime::Full) {
                segments.push_back({1, T, MeasurementOperator::identity(p.grid()),
                                    [&p](int ph, const InducedSpectrum& sp) {
                                        const FunctionalCoords fc = functional_coords(sp, p.phase_canonical(ph));
                                        return LinearObjective{fc.mbar, fc.m_norm};
                                    }});
            } else if (opts.regime == Regime::Partial) {
                MeasurementOperator M = projection_for(p, 1);
                segments.push_back({1, T, M, [&p, M](int ph, const InducedSpectrum& sp) {
                                        return weights_objective(M, p.phase(ph).weights, sp);
                                    }});
            } else {
                MeasurementOperator M = MeasurementOperator::scalar(p.phase(1).m);
                segments.push_back({1, T, M, [M](int, const InducedSpectrum& sp) {
                                        return weights_objective(M, Eigen::VectorXd::Ones(1), sp);
                                    }});
            }
            break;
        }
        case Method::MTBO: {
            MeasurementOperator M = projection_for(p, 1);
            segments.push_back({1, T, M, [&p, M](int, const InducedSpectrum& sp) {
                                    return weights_objective(M, p.phase(1).weights, sp);
                                }});
            break;
        }
        case Method::RMTBO: {
            int first = 1;
            for (int ph = 1; ph <= P; ++ph) {
                const int len = p.schedule().phases[static_cast<std::size_t>(ph - 1)].iterations;
                MeasurementOperator M = projection_for(p, ph);
                segments.push_back({first, len, M, [&p, M](int phase, const InducedSpectrum& sp) {
                                        return weights_objective(M, p.phase(phase).weights, sp);
                                    }});
                first += len;
            }
            break;
        }
        default:
            throw InternalError("not an engine method");
    }
    return run_engine_segments(p, segments, labels, opts, rng);
}

RegretTrace run_scalar_method(const StructuredProblem& p, const MethodOptions& opts, Rng& rng) {
    const int P = active_phases(p, opts.regime);
    const std::vector<int> labels = phase_labels(p, P);
    const int T = static_cast<int>(labels.size());
    const bool contextual = opts.method == Method::CTBO || opts.method == Method::FFBO;
    const bool resets = opts.method == Method::RBO;
    const int d = p.domain().dim();
    const int r = p.grid()->rank();

    std::optional<ScalarGP> gp;
    if (contextual) {
        AugmentedKernel k{p.input_kernel(), Eigen::MatrixXd::Identity(r, r)};
        gp.emplace(k.as_function(), p.setup().lambda, k.as_cross());
    } else {
        const ScalarKernel G = p.input_kernel();
        gp.emplace([G](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return G(a, b); }, p.setup().lambda,
                   [G](const Eigen::MatrixXd& cand, const std::vector<Eigen::VectorXd>& X) {
                       return cross_gram_rows(G, cand, X);
                   });
    }

    auto augment = [&](const Eigen::MatrixXd& xs, const Eigen::VectorXd& ctx) {
        if (!contextual) return xs;
        Eigen::MatrixXd out(xs.rows(), d + r);
        out.leftCols(d) = xs;
        out.rightCols(r) = ctx.transpose().replicate(xs.rows(), 1);
        return out;
    };

    RegretTrace trace;
    trace.reserve(static_cast<std::size_t>(T));
    int prev_phase = 0;
    bool fresh = true;
    for (int t = 1; t <= T; ++t) {
        const auto start = std::chrono::steady_clock::now();
        const int ph = labels[static_cast<std::size_t>(t - 1)];
        if (ph != prev_phase && prev_phase != 0 && resets) {
            gp->clear();
            fresh = true;
        }
        prev_phase = ph;
        const Eigen::VectorXd& cm = p.phase_canonical(ph);
        const Eigen::VectorXd& ctx = opts.method == Method::FFBO ? p.phase_canonical(1) : cm;
        const double scale = contextual ? 1.0 : cm.norm();
        double beta = 0.0;
        if (const auto b = phase_beta(opts.beta, p, ph)) {
            beta = *b;
        } else {
            PosteriorHyperparams h;
            h.lambda = p.setup().lambda;
            h.gamma = opts.beta.gamma;
            h.sigma = opts.beta.sigma;
            h.zeta = opts.beta.zeta;
            beta = theoretical_beta(h, gp->log_det());
        }

        auto predict_rows = [&](const Eigen::MatrixXd& xs) { return gp->predict(augment(xs, ctx)); };
        const BatchScorer scorer = [&](const Eigen::MatrixXd& xs) {
            const ScalarGP::Batch b = predict_rows(xs);
            return Eigen::VectorXd(b.mean + beta * scale * b.variance.cwiseSqrt());
        };

        Maximizer choice;
        if (fresh && opts.random_first_query) {
            choice.x = random_point(opts.optimizer, p.domain(), rng);
            choice.value = scorer(Eigen::MatrixXd(choice.x.transpose()))(0);
        } else {
            choice = maximize_acquisition(opts.optimizer, p.domain(), scorer, rng);
        }
        fresh = false;

        TraceRecord rec;
        rec.run = opts.run_id;
        rec.iteration = t;
        rec.phase = ph;
        rec.x = choice.x;
        rec.acquisition = choice.value;
        rec.beta = beta;
        rec.posterior_size = gp->size();
        rec.width = beta * scale * std::sqrt(predict_rows(Eigen::MatrixXd(choice.x.transpose())).variance(0));

        const double y = cm.dot(p.noisy_canonical(choice.x, rng));
        Eigen::VectorXd input(contextual ? d + r : d);
        input.head(d) = choice.x;
        if (contextual) input.tail(r) = ctx;
        gp->update(input, y);

        rec.f_value = p.objective(choice.x, ph);
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        trace.push_back(std::move(rec));
    }
    return trace;
}

}  // namespace

RegretTrace run_method(const StructuredProblem& problem, const MethodOptions& opts, Rng& rng) {
    RegretTrace trace;
    switch (opts.method) {
        case Method::VVBO:
        case Method::MTBO:
        case Method::RMTBO: trace = run_engine_method(problem, opts, rng); break;
        case Method::BO:
        case Method::RBO:
        case Method::CTBO:
        case Method::FFBO: trace = run_scalar_method(problem, opts, rng); break;
    }
    std::vector<double> optima;
    for (int i = 1; i <= problem.num_phases(); ++i) optima.push_back(problem.optimum(i));
    apply_regret(trace, optima);
    return trace;
}

}  // namespace vvbo
