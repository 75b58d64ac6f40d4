// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include "cirauth/dataset_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "byteio.hpp"

namespace cirauth {

namespace detail {

std::uint32_t crc32(const std::uint8_t* data, std::size_t size) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < size; ++i) {
        crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
    }
    return crc ^ 0xFFFFFFFFu;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path + ": cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(path + ": write failed");
}

}  // namespace detail

namespace {

constexpr char kMagic[4] = {'C', 'I', 'R', '1'};
constexpr std::uint16_t kVersion = 1;

void put_scenario(std::vector<std::uint8_t>& buf, const ScenarioParams& s) {
    detail::put_f64(buf, s.carrier_frequency_hz);
    detail::put_f64(buf, s.k_factor_db);
    detail::put_f64(buf, s.path_loss_exponent);
    detail::put_f64(buf, s.rms_delay_spread_s);
    detail::put_f64(buf, s.mean_delay_s);
    detail::put_u32(buf, s.num_taps);
    detail::put_u32(buf, s.cir_dim);
    detail::put_f64(buf, s.temporal_correlation);
    detail::put_f64(buf, s.noise_floor);
    detail::put_f64(buf, s.fluctuation_share);
    detail::put_f64(buf, s.correlation_length_m);
    detail::put_f64(buf, s.tx_gain_jitter_db);
    detail::put_f64(buf, s.burst_probability);
    detail::put_f64(buf, s.burst_factor);
    detail::put_u8(buf, static_cast<std::uint8_t>(s.field_kernel));
}

ScenarioParams take_scenario(detail::ByteReader& r) {
    ScenarioParams s;
    s.carrier_frequency_hz = r.f64();
    s.k_factor_db = r.f64();
    s.path_loss_exponent = r.f64();
    s.rms_delay_spread_s = r.f64();
    s.mean_delay_s = r.f64();
    s.num_taps = r.u32();
    s.cir_dim = r.u32();
    s.temporal_correlation = r.f64();
    s.noise_floor = r.f64();
    s.fluctuation_share = r.f64();
    s.correlation_length_m = r.f64();
    s.tx_gain_jitter_db = r.f64();
    s.burst_probability = r.f64();
    s.burst_factor = r.f64();
    s.field_kernel = static_cast<FieldKernel>(r.u8());
    return s;
}

}  // namespace

void save_dataset(const Dataset& dataset, const std::string& path) {
    std::vector<std::uint8_t> body;
    body.reserve(64 + dataset.records.size() * (9 + 16 * dataset.scenario.cir_dim));
    detail::put_u16(body, kVersion);
    put_scenario(body, dataset.scenario);
    detail::put_u32(body, static_cast<std::uint32_t>(dataset.geometry.node_count()));
    for (const auto& p : dataset.geometry.node_positions) {
        detail::put_f64(body, p[0]);
        detail::put_f64(body, p[1]);
    }
    detail::put_f64(body, dataset.geometry.bob_position[0]);
    detail::put_f64(body, dataset.geometry.bob_position[1]);
    detail::put_u32(body, dataset.geometry.alice_node_index);
    detail::put_u64(body, dataset.seed);
    detail::put_u64(body, dataset.records.size());
    for (const auto& rec : dataset.records) {
        detail::put_u32(body, rec.node_id);
        detail::put_u32(body, rec.time_index);
        detail::put_u8(body, rec.is_alice ? 1 : 0);
        for (const auto& v : rec.cir) {
            detail::put_f64(body, v.real());
            detail::put_f64(body, v.imag());
        }
    }

    std::vector<std::uint8_t> bytes;
    bytes.reserve(body.size() + 8);
    bytes.insert(bytes.end(), kMagic, kMagic + 4);
    bytes.insert(bytes.end(), body.begin(), body.end());
    detail::put_u32(bytes, detail::crc32(body.data(), body.size()));
    detail::write_file(path, bytes);
}

Dataset load_dataset(const std::string& path) {
    const auto bytes = detail::read_file(path);
    if (bytes.size() < 10) throw IoError(path + ": truncated payload");
    if (!std::equal(kMagic, kMagic + 4, bytes.begin())) {
        throw IoError(path + ": not a CIR1 dataset (bad magic)");
    }
    detail::ByteReader r(bytes.data() + 4, bytes.size() - 8, path);
    const std::uint16_t version = r.u16();
    if (version != kVersion) {
        throw IoError(path + ": unsupported dataset version " + std::to_string(version));
    }

    Dataset d;
    d.scenario = take_scenario(r);
    const std::uint32_t nodes = r.u32();
    d.geometry.node_positions.resize(nodes);
    for (auto& p : d.geometry.node_positions) {
        p[0] = r.f64();
        p[1] = r.f64();
    }
    d.geometry.bob_position[0] = r.f64();
    d.geometry.bob_position[1] = r.f64();
    d.geometry.alice_node_index = r.u32();
    d.seed = r.u64();
    const std::uint64_t count = r.u64();
    d.records.resize(count);
    for (auto& rec : d.records) {
        rec.node_id = r.u32();
        rec.time_index = r.u32();
        rec.is_alice = r.u8() != 0;
        rec.cir.resize(d.scenario.cir_dim);
        for (auto& v : rec.cir) {
            const double re = r.f64();
            const double im = r.f64();
            v = {re, im};
        }
    }
    if (r.remaining() != 0) throw IoError(path + ": trailing bytes after records");

    detail::ByteReader crc_reader(bytes.data() + bytes.size() - 4, 4, path);
    const std::uint32_t stored = crc_reader.u32();
    const std::uint32_t actual = detail::crc32(bytes.data() + 4, bytes.size() - 8);
    if (stored != actual) throw IoError(path + ": checksum mismatch");
    return d;
}

namespace {

bool parse_double(const std::string& field, double& out) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end;
}

}  // namespace

Dataset import_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open for reading");
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    if (line.rfind("node_id,time_index,is_alice,re_0,im_0", 0) != 0) {
        throw IoError(path + ": unexpected CSV header, want node_id,time_index,is_alice,re_0,im_0,...");
    }
    std::size_t columns = 1;
    for (char c : line) {
        if (c == ',') ++columns;
    }
    if (columns < 5 || (columns - 3) % 2 != 0) {
        throw IoError(path + ": header must carry re_i,im_i pairs");
    }
    const std::size_t dim = (columns - 3) / 2;

    Dataset d;
    std::uint32_t max_node = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        fields.reserve(columns);
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != columns) {
            throw IoError(path + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(columns) + " fields, got " + std::to_string(fields.size()));
        }
        CirRecord rec;
        double v = 0.0;
        if (!parse_double(fields[0], v)) throw IoError(path + ": bad node_id at line " + std::to_string(line_no));
        rec.node_id = static_cast<std::uint32_t>(v);
        if (!parse_double(fields[1], v)) throw IoError(path + ": bad time_index at line " + std::to_string(line_no));
        rec.time_index = static_cast<std::uint32_t>(v);
        rec.is_alice = fields[2] == "1" || fields[2] == "true";
        rec.cir.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            double re = 0.0;
            double im = 0.0;
            if (!parse_double(fields[3 + 2 * i], re) || !parse_double(fields[4 + 2 * i], im)) {
                throw IoError(path + ": bad complex entry at line " + std::to_string(line_no));
            }
            rec.cir[i] = {re, im};
        }
        max_node = std::max(max_node, rec.node_id);
        d.records.push_back(std::move(rec));
    }
    if (d.records.empty()) throw IoError(path + ": no records");

    d.scenario = static_scenario(static_cast<std::uint32_t>(dim));
    d.scenario.num_taps = std::min<std::uint32_t>(d.scenario.num_taps, d.scenario.cir_dim);
    // Positions of imported nodes are unknown; synthesize a line so geometry
    // invariants (half-wavelength separation) still hold.
    d.geometry.bob_position = {0.0, 0.0};
    for (std::uint32_t n = 0; n <= max_node; ++n) {
        d.geometry.node_positions.push_back({static_cast<double>(n), 1.0});
    }
    d.geometry.alice_node_index = 0;
    for (const auto& rec : d.records) {
        if (rec.is_alice) {
            d.geometry.alice_node_index = rec.node_id;
            break;
        }
    }
    return d;
}

Dataset load_dataset_auto(const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
        return import_dataset_csv(path);
    }
    return load_dataset(path);
}

}  // namespace cirauth
