#include "wellcast/model_io.hpp"

#include "wellcast/csv.hpp"
#include "wellcast/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace wellcast {

namespace {

constexpr const char* kMagic = "wellcast-model";
constexpr int kVersion = 1;

void write_matrix(std::ostream& out, const char* name, const Eigen::MatrixXd& m) {
    out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (long r = 0; r < m.rows(); ++r) {
        for (long c = 0; c < m.cols(); ++c) {
            out << (c ? " " : "") << csv::format_double(m(r, c));
        }
        out << '\n';
    }
}

void write_vector(std::ostream& out, const char* name, const Eigen::VectorXd& v) {
    write_matrix(out, name, v);
}

void write_keys(std::ostream& out, const char* name, const std::vector<ColumnKey>& keys) {
    out << name << ' ' << keys.size() << '\n';
    for (const auto& key : keys) {
        out << key.well_id << ' ' << phase_name(key.phase) << ' ' << key.lag << '\n';
    }
}

struct Reader {
    std::ifstream in;
    std::filesystem::path path;
    size_t line_no = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + what);
    }

    std::string next_line() {
        std::string line;
        if (!std::getline(in, line)) {
            fail("unexpected end of model file");
        }
        ++line_no;
        return line;
    }

    std::vector<std::string> expect(const std::string& tag, size_t n_args) {
        const std::string line = next_line();
        std::istringstream ss(line);
        std::string got;
        ss >> got;
        if (got != tag) {
            fail("expected '" + tag + "', got '" + got + "'");
        }
        std::vector<std::string> args;
        std::string a;
        while (ss >> a) {
            args.push_back(a);
        }
        if (args.size() != n_args) {
            fail("expected " + std::to_string(n_args) + " values after '" + tag + "'");
        }
        return args;
    }

    double parse_number(const std::string& s) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            fail("bad number '" + s + "'");
        }
        return v;
    }

    Eigen::MatrixXd read_matrix(const std::string& tag) {
        const auto dims = expect(tag, 2);
        const long rows = long(parse_number(dims[0]));
        const long cols = long(parse_number(dims[1]));
        Eigen::MatrixXd m(rows, cols);
        for (long r = 0; r < rows; ++r) {
            std::istringstream ss(next_line());
            std::string cell;
            for (long c = 0; c < cols; ++c) {
                if (!(ss >> cell)) {
                    fail("matrix row too short");
                }
                m(r, c) = parse_number(cell);
            }
        }
        return m;
    }

    Eigen::VectorXd read_vector(const std::string& tag) {
        const Eigen::MatrixXd m = read_matrix(tag);
        if (m.cols() != 1) {
            fail("expected a column vector for '" + tag + "'");
        }
        return m.col(0);
    }

    std::vector<ColumnKey> read_keys(const std::string& tag) {
        const auto args = expect(tag, 1);
        const size_t n = size_t(parse_number(args[0]));
        std::vector<ColumnKey> keys;
        keys.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            std::istringstream ss(next_line());
            ColumnKey key;
            std::string phase;
            if (!(ss >> key.well_id >> phase >> key.lag)) {
                fail("bad column key");
            }
            key.phase = phase_from_name(phase);
            keys.push_back(std::move(key));
        }
        return keys;
    }
};

} // namespace

std::string TrainedEstimator::describe() const {
    std::string d(estimator_name(kind));
    if (kind == EstimatorKind::Ridge || kind == EstimatorKind::Lasso) {
        d += "(alpha=" + csv::format_double(linear.alpha) + ")";
    } else if (kind == EstimatorKind::Mlp) {
        d += "(" + std::to_string(mlp.hidden_size()) + ", " +
             std::string(activation_name(mlp.activation)) + ")";
    }
    return d;
}

Eigen::VectorXd TrainedEstimator::predict_raw(const Eigen::VectorXd& x_raw) const {
    if (x_raw.size() != long(normalizer.x_keys.size())) {
        throw SchemaError("input vector length does not match the model schema");
    }
    const Eigen::VectorXd xn =
        (x_raw - normalizer.x_mean).array() / normalizer.x_std.array();
    Eigen::MatrixXd yn;
    if (kind == EstimatorKind::Mlp) {
        yn = predict(mlp, xn.transpose());
    } else {
        yn = predict(linear, xn.transpose());
    }
    return (yn.row(0).transpose().array() * normalizer.y_std.array()) + normalizer.y_mean.array();
}

void save_model(const TrainedEstimator& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write model file: " + path.string());
    }
    out << kMagic << " v" << kVersion << '\n';
    out << "kind " << estimator_name(model.kind) << '\n';
    out << "window " << model.window.look_back << ' ' << model.window.look_forward << ' '
        << scope_name(model.window.scope) << '\n';
    write_keys(out, "x_keys", model.normalizer.x_keys);
    write_keys(out, "y_keys", model.normalizer.y_keys);
    write_vector(out, "x_mean", model.normalizer.x_mean);
    write_vector(out, "x_std", model.normalizer.x_std);
    write_vector(out, "y_mean", model.normalizer.y_mean);
    write_vector(out, "y_std", model.normalizer.y_std);
    if (model.kind == EstimatorKind::Mlp) {
        out << "activation " << activation_name(model.mlp.activation) << '\n';
        write_matrix(out, "w_in", model.mlp.w_in);
        write_vector(out, "b_hidden", model.mlp.b_hidden);
        write_matrix(out, "w_out", model.mlp.w_out);
        write_vector(out, "b_out", model.mlp.b_out);
    } else {
        out << "alpha " << csv::format_double(model.linear.alpha) << '\n';
        write_matrix(out, "weights", model.linear.weights);
        write_vector(out, "intercept", model.linear.intercept);
    }
}

TrainedEstimator load_model(const std::filesystem::path& path) {
    Reader reader;
    reader.path = path;
    reader.in.open(path);
    if (!reader.in) {
        throw DataError("cannot open model file: " + path.string());
    }
    {
        const std::string line = reader.next_line();
        if (line != std::string(kMagic) + " v" + std::to_string(kVersion)) {
            reader.fail("unsupported model file header '" + line + "'");
        }
    }
    TrainedEstimator model;
    model.kind = estimator_from_name(reader.expect("kind", 1)[0]);
    {
        const auto args = reader.expect("window", 3);
        model.window.look_back = int(reader.parse_number(args[0]));
        model.window.look_forward = int(reader.parse_number(args[1]));
        model.window.scope = scope_from_name(args[2]);
    }
    model.normalizer.x_keys = reader.read_keys("x_keys");
    model.normalizer.y_keys = reader.read_keys("y_keys");
    model.normalizer.x_mean = reader.read_vector("x_mean");
    model.normalizer.x_std = reader.read_vector("x_std");
    model.normalizer.y_mean = reader.read_vector("y_mean");
    model.normalizer.y_std = reader.read_vector("y_std");
    if (model.kind == EstimatorKind::Mlp) {
        model.mlp.activation = activation_from_name(reader.expect("activation", 1)[0]);
        model.mlp.w_in = reader.read_matrix("w_in");
        model.mlp.b_hidden = reader.read_vector("b_hidden");
        model.mlp.w_out = reader.read_matrix("w_out");
        model.mlp.b_out = reader.read_vector("b_out");
    } else {
        model.linear.kind = model.kind;
        model.linear.alpha = reader.parse_number(reader.expect("alpha", 1)[0]);
        model.linear.weights = reader.read_matrix("weights");
        model.linear.intercept = reader.read_vector("intercept");
    }
    return model;
}

} // namespace wellcast
