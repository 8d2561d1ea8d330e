#include "cdlab/field_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace cdlab {

void write_snapshot(std::ostream& os, const Field& field) {
    const Grid& g = field.grid();
    os << g.dim << ' ' << field.components();
    for (int a = 0; a < g.dim; ++a) os << ' ' << g.cells[a];
    os << std::setprecision(17);
    for (int a = 0; a < g.dim; ++a) os << ' ' << g.extents[a];
    os << '\n';
    for (long cell = 0; cell < field.cell_count(); ++cell) {
        for (int c = 0; c < field.components(); ++c) {
            if (c) os << ' ';
            os << field.at(cell, c);
        }
        os << '\n';
    }
}

void save_snapshot(const std::filesystem::path& path, const Field& field) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_snapshot: cannot open " + path.string());
    write_snapshot(os, field);
    if (!os) throw std::runtime_error("save_snapshot: write failed for " + path.string());
}

Field read_snapshot(std::istream& is) {
    int dim = 0, m = 0;
    if (!(is >> dim >> m)) throw std::runtime_error("read_snapshot: bad header");
    if (dim < 1 || dim > 3 || m < 1) throw std::runtime_error("read_snapshot: bad header values");
    std::array<int, 3> cells{1, 1, 1};
    std::array<double, 3> extents{1.0, 1.0, 1.0};
    for (int a = 0; a < dim; ++a)
        if (!(is >> cells[a])) throw std::runtime_error("read_snapshot: bad cell counts");
    for (int a = 0; a < dim; ++a)
        if (!(is >> extents[a])) throw std::runtime_error("read_snapshot: bad extents");
    Grid g = Grid::make(dim, cells, extents);
    Field f(g, m);
    for (long cell = 0; cell < f.cell_count(); ++cell)
        for (int c = 0; c < m; ++c)
            if (!(is >> f.at(cell, c))) throw std::runtime_error("read_snapshot: truncated values");
    return f;
}

Field load_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_snapshot: cannot open " + path.string());
    return read_snapshot(is);
}

void export_csv(const std::filesystem::path& path, const Field& field) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("export_csv: cannot open " + path.string());
    const Grid& g = field.grid();
    for (int a = 0; a < g.dim; ++a) os << 'x' << a << ',';
    for (int c = 0; c < field.components(); ++c) os << 'c' << c << (c + 1 < field.components() ? "," : "");
    os << '\n' << std::setprecision(17);
    for (long cell = 0; cell < field.cell_count(); ++cell) {
        auto x = g.center(cell);
        for (int a = 0; a < g.dim; ++a) os << x[a] << ',';
        for (int c = 0; c < field.components(); ++c)
            os << field.at(cell, c) << (c + 1 < field.components() ? "," : "");
        os << '\n';
    }
}

}  // namespace cdlab
