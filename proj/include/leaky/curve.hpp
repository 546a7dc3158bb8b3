#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "leaky/errors.hpp"

namespace leaky {

/// Sampled 1-D data: a strictly increasing abscissa plus named real columns.
/// Complex data is stored as a re_<name>, im_<name> column pair.
struct Curve {
    struct Column {
        std::string label;
        std::vector<double> values;
    };

    std::string abscissa_label;
    std::vector<double> abscissa;
    std::vector<Column> columns;

    Curve(std::string label, std::vector<double> grid)
        : abscissa_label(std::move(label)), abscissa(std::move(grid))
    {
        for (std::size_t i = 1; i < abscissa.size(); ++i)
            if (!(abscissa[i] > abscissa[i - 1]))
                throw ValidationError("curve abscissa '" + abscissa_label
                                      + "' must be strictly increasing");
    }

    std::size_t size() const { return abscissa.size(); }

    Curve& add(std::string label, std::vector<double> values)
    {
        if (values.size() != abscissa.size())
            throw ValidationError("column '" + label + "' length does not match the abscissa");
        columns.push_back({std::move(label), std::move(values)});
        return *this;
    }

    Curve& add(const std::string& name, std::span<const std::complex<double>> values)
    {
        std::vector<double> re(values.size()), im(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            re[i] = values[i].real();
            im[i] = values[i].imag();
        }
        add("re_" + name, std::move(re));
        return add("im_" + name, std::move(im));
    }

    const Column* find(const std::string& label) const
    {
        for (const auto& c : columns)
            if (c.label == label) return &c;
        return nullptr;
    }
};

/// `count` points from start to stop, endpoints included.
inline std::vector<double> linspace(double start, double stop, std::size_t count)
{
    if (count == 0) throw ValidationError("grid count must be >= 1");
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = start;
        return out;
    }
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
    out.back() = stop;
    return out;
}

/// Indices of strict interior local maxima.
inline std::vector<std::size_t> local_maxima(std::span<const double> y)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] > y[i - 1] && y[i] > y[i + 1]) idx.push_back(i);
    return idx;
}

} // namespace leaky
