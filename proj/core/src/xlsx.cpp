#include "sheetlint/xlsx.hpp"

#if SHEETLINT_HAS_XLSX

#include "sheetlint/formula.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace sheetlint {

namespace {

// --- minimal ZIP reader (stored and deflate entries) -----------------------

std::uint16_t read_u16(const std::string& data, std::size_t offset) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(data[offset]) |
                                      (static_cast<unsigned char>(data[offset + 1]) << 8));
}

std::uint32_t read_u32(const std::string& data, std::size_t offset) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(data[offset])) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(data[offset + 1])) << 8) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(data[offset + 2])) << 16) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(data[offset + 3])) << 24);
}

std::string inflate_raw(const std::string& compressed, std::size_t expected_size) {
    std::string out(expected_size, '\0');
    z_stream stream{};
    if (inflateInit2(&stream, -MAX_WBITS) != Z_OK) throw Error("unreadable archive: zlib init");
    stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
    stream.avail_in = static_cast<uInt>(compressed.size());
    stream.next_out = reinterpret_cast<Bytef*>(out.data());
    stream.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&stream, Z_FINISH);
    inflateEnd(&stream);
    if (rc != Z_STREAM_END && !(rc == Z_OK && stream.avail_out == 0))
        throw Error("unreadable archive: bad deflate stream");
    out.resize(out.size() - stream.avail_out);
    return out;
}

class ZipArchive {
public:
    explicit ZipArchive(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error("unreadable archive: cannot open " + path.string());
        std::ostringstream buffer;
        buffer << in.rdbuf();
        data_ = buffer.str();
        parse_central_directory();
    }

    bool has(const std::string& name) const { return entries_.count(name) > 0; }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& [name, entry] : entries_) out.push_back(name);
        return out;
    }

    std::string read(const std::string& name) const {
        auto it = entries_.find(name);
        if (it == entries_.end()) throw Error("unreadable archive: missing part " + name);
        const Entry& e = it->second;
        if (e.local_offset + 30 > data_.size()) throw Error("unreadable archive: truncated");
        if (read_u32(data_, e.local_offset) != 0x04034b50)
            throw Error("unreadable archive: bad local header");
        std::size_t name_len = read_u16(data_, e.local_offset + 26);
        std::size_t extra_len = read_u16(data_, e.local_offset + 28);
        std::size_t start = e.local_offset + 30 + name_len + extra_len;
        if (start + e.compressed_size > data_.size())
            throw Error("unreadable archive: truncated entry");
        std::string raw = data_.substr(start, e.compressed_size);
        if (e.method == 0) return raw;
        if (e.method == 8) return inflate_raw(raw, e.uncompressed_size);
        throw Error("unreadable archive: unsupported compression method");
    }

private:
    struct Entry {
        std::size_t local_offset = 0;
        std::size_t compressed_size = 0;
        std::size_t uncompressed_size = 0;
        int method = 0;
    };

    std::string data_;
    std::map<std::string, Entry> entries_;

    void parse_central_directory() {
        if (data_.size() < 22) throw Error("unreadable archive: too small");
        // scan backwards for the end-of-central-directory signature
        std::size_t scan_start = data_.size() >= 22 + 65536 ? data_.size() - 22 - 65536 : 0;
        std::size_t eocd = std::string::npos;
        for (std::size_t i = data_.size() - 22 + 1; i-- > scan_start;) {
            if (read_u32(data_, i) == 0x06054b50) {
                eocd = i;
                break;
            }
        }
        if (eocd == std::string::npos) throw Error("unreadable archive: no central directory");

        std::size_t count = read_u16(data_, eocd + 10);
        std::size_t cd_offset = read_u32(data_, eocd + 16);
        std::size_t pos = cd_offset;
        for (std::size_t i = 0; i < count; ++i) {
            if (pos + 46 > data_.size() || read_u32(data_, pos) != 0x02014b50)
                throw Error("unreadable archive: bad central directory");
            Entry e;
            e.method = read_u16(data_, pos + 10);
            e.compressed_size = read_u32(data_, pos + 20);
            e.uncompressed_size = read_u32(data_, pos + 24);
            std::size_t name_len = read_u16(data_, pos + 28);
            std::size_t extra_len = read_u16(data_, pos + 30);
            std::size_t comment_len = read_u16(data_, pos + 32);
            e.local_offset = read_u32(data_, pos + 42);
            std::string name = data_.substr(pos + 46, name_len);
            entries_[name] = e;
            pos += 46 + name_len + extra_len + comment_len;
        }
    }
};

// --- minimal XML pull scanner ------------------------------------------------

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text[i] != '&') {
            out += text[i++];
            continue;
        }
        std::size_t end = text.find(';', i);
        if (end == std::string_view::npos) {
            out += text[i++];
            continue;
        }
        std::string_view entity = text.substr(i + 1, end - i - 1);
        if (entity == "amp") out += '&';
        else if (entity == "lt") out += '<';
        else if (entity == "gt") out += '>';
        else if (entity == "quot") out += '"';
        else if (entity == "apos") out += '\'';
        else if (!entity.empty() && entity[0] == '#') {
            long code = 0;
            if (entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X'))
                code = std::strtol(std::string(entity.substr(2)).c_str(), nullptr, 16);
            else
                code = std::strtol(std::string(entity.substr(1)).c_str(), nullptr, 10);
            // encode as UTF-8
            if (code < 0x80) {
                out += static_cast<char>(code);
            } else if (code < 0x800) {
                out += static_cast<char>(0xC0 | (code >> 6));
                out += static_cast<char>(0x80 | (code & 0x3F));
            } else if (code < 0x10000) {
                out += static_cast<char>(0xE0 | (code >> 12));
                out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
                out += static_cast<char>(0x80 | (code & 0x3F));
            } else {
                out += static_cast<char>(0xF0 | (code >> 18));
                out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
                out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
                out += static_cast<char>(0x80 | (code & 0x3F));
            }
        }
        i = end + 1;
    }
    return out;
}

struct XmlTag {
    enum class Kind { Open, Close, SelfClose, End };
    Kind kind = Kind::End;
    std::string name;
    std::map<std::string, std::string> attrs;
};

class XmlScanner {
public:
    explicit XmlScanner(std::string_view xml) : xml_(xml) {}

    /// Text from the cursor to the next tag, entity-decoded.
    std::string take_text() {
        std::size_t start = pos_;
        while (pos_ < xml_.size() && xml_[pos_] != '<') pos_++;
        return decode_entities(xml_.substr(start, pos_ - start));
    }

    XmlTag next_tag() {
        while (pos_ < xml_.size()) {
            while (pos_ < xml_.size() && xml_[pos_] != '<') pos_++;
            if (pos_ >= xml_.size()) break;
            if (starts_with("<!--")) {
                skip_until("-->");
                continue;
            }
            if (starts_with("<?")) {
                skip_until("?>");
                continue;
            }
            if (starts_with("<![CDATA[")) {
                skip_until("]]>");
                continue;
            }
            if (starts_with("<!")) {
                skip_until(">");
                continue;
            }
            return parse_tag();
        }
        return XmlTag{};
    }

private:
    std::string_view xml_;
    std::size_t pos_ = 0;

    bool starts_with(std::string_view prefix) const {
        return xml_.substr(pos_, prefix.size()) == prefix;
    }

    void skip_until(std::string_view marker) {
        std::size_t at = xml_.find(marker, pos_);
        pos_ = at == std::string_view::npos ? xml_.size() : at + marker.size();
    }

    XmlTag parse_tag() {
        XmlTag tag;
        pos_++; // '<'
        bool closing = false;
        if (pos_ < xml_.size() && xml_[pos_] == '/') {
            closing = true;
            pos_++;
        }
        std::size_t name_start = pos_;
        while (pos_ < xml_.size() && xml_[pos_] != '>' && xml_[pos_] != '/' &&
               !std::isspace(static_cast<unsigned char>(xml_[pos_])))
            pos_++;
        tag.name = std::string(xml_.substr(name_start, pos_ - name_start));

        while (pos_ < xml_.size() && xml_[pos_] != '>' && xml_[pos_] != '/') {
            while (pos_ < xml_.size() && std::isspace(static_cast<unsigned char>(xml_[pos_])))
                pos_++;
            if (pos_ >= xml_.size() || xml_[pos_] == '>' || xml_[pos_] == '/') break;
            std::size_t attr_start = pos_;
            while (pos_ < xml_.size() && xml_[pos_] != '=' &&
                   !std::isspace(static_cast<unsigned char>(xml_[pos_])) && xml_[pos_] != '>')
                pos_++;
            std::string attr(xml_.substr(attr_start, pos_ - attr_start));
            while (pos_ < xml_.size() && xml_[pos_] != '=' && xml_[pos_] != '>') pos_++;
            if (pos_ >= xml_.size() || xml_[pos_] != '=') break;
            pos_++; // '='
            while (pos_ < xml_.size() && std::isspace(static_cast<unsigned char>(xml_[pos_])))
                pos_++;
            if (pos_ >= xml_.size()) break;
            char quote = xml_[pos_];
            if (quote != '"' && quote != '\'') break;
            pos_++;
            std::size_t value_start = pos_;
            while (pos_ < xml_.size() && xml_[pos_] != quote) pos_++;
            tag.attrs[attr] = decode_entities(xml_.substr(value_start, pos_ - value_start));
            if (pos_ < xml_.size()) pos_++; // closing quote
        }

        bool self_close = false;
        if (pos_ < xml_.size() && xml_[pos_] == '/') {
            self_close = true;
            pos_++;
        }
        if (pos_ < xml_.size() && xml_[pos_] == '>') pos_++;
        tag.kind = closing ? XmlTag::Kind::Close
                           : (self_close ? XmlTag::Kind::SelfClose : XmlTag::Kind::Open);
        return tag;
    }
};

// --- workbook assembly ----------------------------------------------------------

std::vector<std::string> parse_shared_strings(const std::string& xml) {
    std::vector<std::string> strings;
    XmlScanner scanner(xml);
    std::string current;
    bool in_si = false;
    while (true) {
        XmlTag tag = scanner.next_tag();
        if (tag.kind == XmlTag::Kind::End) break;
        if (tag.name == "si") {
            if (tag.kind == XmlTag::Kind::Open) {
                in_si = true;
                current.clear();
            } else if (tag.kind == XmlTag::Kind::SelfClose) {
                strings.push_back("");
            } else {
                strings.push_back(current);
                in_si = false;
            }
        } else if (in_si && tag.name == "t" && tag.kind == XmlTag::Kind::Open) {
            current += scanner.take_text();
        }
    }
    return strings;
}

struct SheetRef {
    std::string name;
    std::string rel_id;
};

std::vector<SheetRef> parse_workbook_xml(const std::string& xml) {
    std::vector<SheetRef> sheets;
    XmlScanner scanner(xml);
    while (true) {
        XmlTag tag = scanner.next_tag();
        if (tag.kind == XmlTag::Kind::End) break;
        if (tag.name != "sheet") continue;
        SheetRef ref;
        auto name_it = tag.attrs.find("name");
        if (name_it != tag.attrs.end()) ref.name = name_it->second;
        auto rel_it = tag.attrs.find("r:id");
        if (rel_it != tag.attrs.end()) ref.rel_id = rel_it->second;
        sheets.push_back(std::move(ref));
    }
    return sheets;
}

std::map<std::string, std::string> parse_rels(const std::string& xml) {
    std::map<std::string, std::string> rels;
    XmlScanner scanner(xml);
    while (true) {
        XmlTag tag = scanner.next_tag();
        if (tag.kind == XmlTag::Kind::End) break;
        if (tag.name != "Relationship") continue;
        auto id = tag.attrs.find("Id");
        auto target = tag.attrs.find("Target");
        if (id != tag.attrs.end() && target != tag.attrs.end()) rels[id->second] = target->second;
    }
    return rels;
}

std::string resolve_target(const std::string& target) {
    if (!target.empty() && target.front() == '/') return target.substr(1);
    return "xl/" + target;
}

struct PendingCell {
    Coordinate coord;
    std::string type_attr;       // t attribute
    std::string value;           // <v>
    bool has_value = false;
    std::string inline_string;   // <is><t>
    bool has_inline = false;
    std::string formula;         // <f>
    bool has_formula = false;
    std::string formula_type;    // t attribute of <f>
    std::string shared_index;    // si attribute of <f>
};

void finish_cell(Worksheet& ws, const PendingCell& pc, const std::vector<std::string>& shared,
                 std::map<std::string, Formula>& shared_formulas,
                 std::vector<std::string>& warnings) {
    Cell cell;
    cell.sheet = ws.name;
    cell.coord = pc.coord;

    auto cached_value = [&]() -> std::optional<CellValue> {
        if (pc.has_inline) return CellValue::string(pc.inline_string);
        if (!pc.has_value) return std::nullopt;
        if (pc.type_attr == "s") {
            std::size_t index = static_cast<std::size_t>(std::strtoul(pc.value.c_str(), nullptr, 10));
            return CellValue::string(index < shared.size() ? shared[index] : "");
        }
        if (pc.type_attr == "str") return CellValue::string(pc.value);
        if (pc.type_attr == "b") return CellValue::boolean_value(pc.value == "1" || pc.value == "true");
        if (pc.type_attr == "e") return CellValue::error(pc.value);
        return CellValue::numeric(std::strtod(pc.value.c_str(), nullptr));
    };

    std::string cell_name = ws.name + "!" + to_a1(pc.coord);

    if (pc.has_formula || !pc.shared_index.empty()) {
        std::optional<Formula> formula;
        std::string reason;
        if (pc.formula_type == "array") {
            reason = "array formula";
        } else if (!pc.shared_index.empty() && pc.formula.empty()) {
            // dependent of a shared formula: re-render the master at this cell
            auto it = shared_formulas.find(pc.shared_index);
            if (it != shared_formulas.end()) {
                try {
                    std::string a1 = render_a1(it->second, pc.coord);
                    formula = parse_formula_a1(a1, SheetPos{ws.name, pc.coord});
                } catch (const Error& e) {
                    reason = e.what();
                }
            } else {
                reason = "shared formula master not seen";
            }
        } else {
            try {
                formula = parse_formula_a1(pc.formula, SheetPos{ws.name, pc.coord});
            } catch (const Error& e) {
                reason = e.what();
            }
        }
        if (formula && !pc.shared_index.empty() && !pc.formula.empty())
            shared_formulas[pc.shared_index] = *formula;

        if (formula) {
            cell.type = CellType::Formula;
            cell.formula = std::make_shared<Formula>(std::move(*formula));
            cell.cached = cached_value();
        } else {
            // downgrade to the cached value, keep the sheet loadable
            warnings.push_back(cell_name + ": formula downgraded (" +
                               (reason.empty() ? "unsupported" : reason) + ")");
            std::optional<CellValue> value = cached_value();
            if (!value) return; // nothing to keep
            cell.type = value->type;
            cell.literal = std::move(value);
        }
    } else {
        std::optional<CellValue> value = cached_value();
        if (!value) return; // blank cell entry
        cell.type = value->type;
        cell.literal = std::move(value);
    }

    ws.bounds.col = std::max(ws.bounds.col, pc.coord.col);
    ws.bounds.row = std::max(ws.bounds.row, pc.coord.row);
    ws.cells.emplace(pc.coord, std::move(cell));
}

Worksheet parse_sheet_xml(const std::string& xml, std::string name,
                          const std::vector<std::string>& shared,
                          std::vector<std::string>& warnings) {
    Worksheet ws;
    ws.name = std::move(name);
    ws.bounds = Coordinate{0, 0};

    XmlScanner scanner(xml);
    std::map<std::string, Formula> shared_formulas;
    PendingCell pc;
    bool in_cell = false;
    bool in_is = false;
    while (true) {
        XmlTag tag = scanner.next_tag();
        if (tag.kind == XmlTag::Kind::End) break;
        if (tag.name == "c") {
            if (tag.kind == XmlTag::Kind::Open || tag.kind == XmlTag::Kind::SelfClose) {
                pc = PendingCell{};
                in_cell = false;
                auto r = tag.attrs.find("r");
                if (r == tag.attrs.end()) {
                    warnings.push_back(ws.name + ": skipped cell without an address");
                    continue;
                }
                try {
                    pc.coord = parse_a1(r->second);
                } catch (const Error&) {
                    warnings.push_back(ws.name + ": skipped cell with bad address '" +
                                       r->second + "'");
                    continue;
                }
                auto t = tag.attrs.find("t");
                if (t != tag.attrs.end()) pc.type_attr = t->second;
                in_cell = tag.kind == XmlTag::Kind::Open;
                if (!in_cell) finish_cell(ws, pc, shared, shared_formulas, warnings);
            } else { // closing
                if (in_cell) finish_cell(ws, pc, shared, shared_formulas, warnings);
                in_cell = false;
            }
        } else if (in_cell && tag.name == "v" && tag.kind == XmlTag::Kind::Open) {
            pc.value = scanner.take_text();
            pc.has_value = true;
        } else if (in_cell && tag.name == "f") {
            if (tag.kind != XmlTag::Kind::Close) {
                auto t = tag.attrs.find("t");
                if (t != tag.attrs.end()) pc.formula_type = t->second;
                auto si = tag.attrs.find("si");
                if (si != tag.attrs.end()) pc.shared_index = si->second;
                if (tag.kind == XmlTag::Kind::Open) {
                    pc.formula = scanner.take_text();
                    pc.has_formula = !pc.formula.empty();
                }
                if (tag.kind == XmlTag::Kind::SelfClose && !pc.shared_index.empty())
                    pc.has_formula = false; // dependent cell, resolved via the master
            }
        } else if (in_cell && tag.name == "is") {
            in_is = tag.kind == XmlTag::Kind::Open;
        } else if (in_cell && in_is && tag.name == "t" && tag.kind == XmlTag::Kind::Open) {
            pc.inline_string += scanner.take_text();
            pc.has_inline = true;
        }
    }
    return ws;
}

} // namespace

bool is_xlsx_document(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".xlsx" || ext == ".xlsm";
}

XlsxLoadResult load_xlsx(const std::filesystem::path& path) {
    ZipArchive archive(path);
    if (!archive.has("xl/workbook.xml"))
        throw Error("unreadable archive: not a workbook (" + path.string() + ")");

    XlsxLoadResult result;
    result.workbook.source_path = path.string();

    std::vector<std::string> shared;
    if (archive.has("xl/sharedStrings.xml"))
        shared = parse_shared_strings(archive.read("xl/sharedStrings.xml"));

    std::map<std::string, std::string> rels;
    if (archive.has("xl/_rels/workbook.xml.rels"))
        rels = parse_rels(archive.read("xl/_rels/workbook.xml.rels"));

    std::vector<SheetRef> sheet_refs = parse_workbook_xml(archive.read("xl/workbook.xml"));
    int fallback_index = 1;
    for (const SheetRef& ref : sheet_refs) {
        std::string part;
        auto rel = rels.find(ref.rel_id);
        if (rel != rels.end()) {
            part = resolve_target(rel->second);
        } else {
            part = "xl/worksheets/sheet" + std::to_string(fallback_index) + ".xml";
        }
        fallback_index++;
        if (!archive.has(part)) {
            result.warnings.push_back("missing worksheet part " + part);
            continue;
        }
        result.workbook.sheets.push_back(
            parse_sheet_xml(archive.read(part), ref.name, shared, result.warnings));
    }
    return result;
}

} // namespace sheetlint

#endif // SHEETLINT_HAS_XLSX
