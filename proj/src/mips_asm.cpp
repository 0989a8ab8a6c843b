#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "imp/mips.hpp"

namespace imp::mips {

namespace {

struct MnemonicInfo {
  Mnemonic op;
  std::string_view text;
};

constexpr MnemonicInfo kMnemonics[] = {
    {Mnemonic::Li, "li"},     {Mnemonic::Lui, "lui"},   {Mnemonic::Ori, "ori"},
    {Mnemonic::Lw, "lw"},     {Mnemonic::Sw, "sw"},     {Mnemonic::Addu, "addu"},
    {Mnemonic::Subu, "subu"}, {Mnemonic::Addiu, "addiu"}, {Mnemonic::And, "and"},
    {Mnemonic::Or, "or"},     {Mnemonic::Xor, "xor"},   {Mnemonic::Nor, "nor"},
    {Mnemonic::Sll, "sll"},   {Mnemonic::Srl, "srl"},   {Mnemonic::Sllv, "sllv"},
    {Mnemonic::Srlv, "srlv"}, {Mnemonic::Slt, "slt"},   {Mnemonic::Sltu, "sltu"},
    {Mnemonic::Beq, "beq"},   {Mnemonic::Bne, "bne"},   {Mnemonic::J, "j"},
    {Mnemonic::Break, "break"},
};

const std::map<std::string, Reg> &register_table() {
  static const std::map<std::string, Reg> table = [] {
    std::map<std::string, Reg> m{{"$zero", 0}, {"$at", 1}, {"$v0", 2}, {"$sp", 29}, {"$ra", 31}};
    for (int i = 0; i < 10; ++i) m["$t" + std::to_string(i)] = t(i);
    for (int i = 0; i < 8; ++i) m["$s" + std::to_string(i)] = s(i);
    return m;
  }();
  return table;
}

Instr base(Mnemonic op) {
  Instr i;
  i.op = op;
  return i;
}

}  // namespace

std::string_view to_string(Mnemonic m) {
  if (m == Mnemonic::Label) return "<label>";
  for (const auto &info : kMnemonics)
    if (info.op == m) return info.text;
  return "?";
}

std::string reg_name(Reg r) {
  for (const auto &[name, num] : register_table())
    if (num == r) return name;
  throw Error("register $" + std::to_string(r) + " is outside the supported subset");
}

Instr label(std::string name) {
  Instr i = base(Mnemonic::Label);
  i.label = std::move(name);
  return i;
}
Instr li(Reg rt, std::int64_t imm) {
  Instr i = base(Mnemonic::Li);
  i.rt = rt;
  i.imm = imm;
  return i;
}
Instr lui(Reg rt, std::int64_t imm) {
  Instr i = base(Mnemonic::Lui);
  i.rt = rt;
  i.imm = imm;
  return i;
}
Instr ori(Reg rt, Reg rs, std::int64_t imm) {
  Instr i = base(Mnemonic::Ori);
  i.rt = rt;
  i.rs = rs;
  i.imm = imm;
  return i;
}
Instr addiu(Reg rt, Reg rs, std::int64_t imm) {
  Instr i = base(Mnemonic::Addiu);
  i.rt = rt;
  i.rs = rs;
  i.imm = imm;
  return i;
}
Instr lw(Reg rt, std::string data_label) {
  Instr i = base(Mnemonic::Lw);
  i.rt = rt;
  i.label = std::move(data_label);
  return i;
}
Instr lw(Reg rt, std::int64_t offset, Reg b) {
  Instr i = base(Mnemonic::Lw);
  i.rt = rt;
  i.imm = offset;
  i.rs = b;
  return i;
}
Instr sw(Reg rt, std::string data_label) {
  Instr i = base(Mnemonic::Sw);
  i.rt = rt;
  i.label = std::move(data_label);
  return i;
}
Instr sw(Reg rt, std::int64_t offset, Reg b) {
  Instr i = base(Mnemonic::Sw);
  i.rt = rt;
  i.imm = offset;
  i.rs = b;
  return i;
}
Instr rrr(Mnemonic op, Reg rd, Reg rs, Reg rt) {
  Instr i = base(op);
  i.rd = rd;
  i.rs = rs;
  i.rt = rt;
  return i;
}
Instr shift(Mnemonic op, Reg rd, Reg rt, std::int64_t shamt) {
  Instr i = base(op);
  i.rd = rd;
  i.rt = rt;
  i.imm = shamt;
  return i;
}
Instr sllv(Reg rd, Reg rt, Reg rs) { return rrr(Mnemonic::Sllv, rd, rs, rt); }
Instr srlv(Reg rd, Reg rt, Reg rs) { return rrr(Mnemonic::Srlv, rd, rs, rt); }
Instr beq(Reg rs, Reg rt, std::string target) {
  Instr i = base(Mnemonic::Beq);
  i.rs = rs;
  i.rt = rt;
  i.label = std::move(target);
  return i;
}
Instr bne(Reg rs, Reg rt, std::string target) {
  Instr i = beq(rs, rt, std::move(target));
  i.op = Mnemonic::Bne;
  return i;
}
Instr j(std::string target) {
  Instr i = base(Mnemonic::J);
  i.label = std::move(target);
  return i;
}
Instr brk() { return base(Mnemonic::Break); }

// ---------------------------------------------------------------------------
// Emission

namespace {

std::string format(const Instr &i) {
  std::string m(to_string(i.op));
  auto r = reg_name;
  auto mem = [&] {
    return i.label.empty() ? std::to_string(i.imm) + "(" + r(i.rs) + ")" : i.label;
  };
  switch (i.op) {
  case Mnemonic::Label:
    return i.label + ":";
  case Mnemonic::Li:
  case Mnemonic::Lui:
    return m + " " + r(i.rt) + ", " + std::to_string(i.imm);
  case Mnemonic::Ori:
  case Mnemonic::Addiu:
    return m + " " + r(i.rt) + ", " + r(i.rs) + ", " + std::to_string(i.imm);
  case Mnemonic::Lw:
  case Mnemonic::Sw:
    return m + " " + r(i.rt) + ", " + mem();
  case Mnemonic::Sll:
  case Mnemonic::Srl:
    return m + " " + r(i.rd) + ", " + r(i.rt) + ", " + std::to_string(i.imm);
  case Mnemonic::Sllv:
  case Mnemonic::Srlv:
    return m + " " + r(i.rd) + ", " + r(i.rt) + ", " + r(i.rs);
  case Mnemonic::Beq:
  case Mnemonic::Bne:
    return m + " " + r(i.rs) + ", " + r(i.rt) + ", " + i.label;
  case Mnemonic::J:
    return m + " " + i.label;
  case Mnemonic::Break:
    return m;
  default:
    return m + " " + r(i.rd) + ", " + r(i.rs) + ", " + r(i.rt);
  }
}

}  // namespace

std::string emit_asm(const MipsProgram &prog) {
  std::string out = ".data\n";
  for (const auto &d : prog.data) out += d.label + ": .word " + std::to_string(d.init) + "\n";
  out += ".text\n.globl main\n";
  for (const auto &i : prog.text) {
    if (i.op != Mnemonic::Label) out += '\t';
    out += format(i);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool is_label_name(const std::string &s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  return true;
}

class LineParser {
public:
  LineParser(int line, std::vector<std::string> operands)
      : line_(line), ops_(std::move(operands)) {}

  void arity(std::size_t n) const {
    if (ops_.size() != n)
      throw AsmError(line_, "expected " + std::to_string(n) + " operands, found " +
                                std::to_string(ops_.size()));
  }

  Reg reg(std::size_t k) const {
    const auto &table = register_table();
    auto it = table.find(ops_[k]);
    if (it == table.end()) throw AsmError(line_, "bad register '" + ops_[k] + "'");
    return it->second;
  }

  std::int64_t imm(std::size_t k, std::int64_t lo, std::int64_t hi) const {
    const std::string &s = ops_[k];
    std::int64_t v = 0;
    try {
      std::size_t used = 0;
      v = std::stoll(s, &used, 0);
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception &) {
      throw AsmError(line_, "bad immediate '" + s + "'");
    }
    if (v < lo || v > hi)
      throw AsmError(line_, "immediate " + s + " out of range [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
    return v;
  }

  std::string name(std::size_t k) const {
    if (!is_label_name(ops_[k])) throw AsmError(line_, "bad label '" + ops_[k] + "'");
    return ops_[k];
  }

  // `label` or `offset(base)`
  Instr memory(Mnemonic op) const {
    arity(2);
    Reg rt = reg(0);
    const std::string &m = ops_[1];
    auto open = m.find('(');
    if (open == std::string::npos) {
      std::string l = name(1);
      return op == Mnemonic::Lw ? lw(rt, l) : sw(rt, l);
    }
    if (m.back() != ')') throw AsmError(line_, "bad memory operand '" + m + "'");
    LineParser inner(line_, {trim(m.substr(0, open)), trim(m.substr(open + 1, m.size() - open - 2))});
    std::int64_t off = inner.ops_[0].empty() ? 0 : inner.imm(0, -32768, 32767);
    Reg b = inner.reg(1);
    return op == Mnemonic::Lw ? lw(rt, off, b) : sw(rt, off, b);
  }

  const std::string &operand(std::size_t k) const { return ops_[k]; }

private:
  int line_;
  std::vector<std::string> ops_;
};

std::vector<std::string> split_operands(const std::string &s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

Instr parse_instruction(int line, const std::string &mn, const std::string &rest) {
  LineParser p(line, split_operands(rest));
  const MnemonicInfo *info = nullptr;
  for (const auto &m : kMnemonics)
    if (m.text == mn) info = &m;
  if (!info) throw AsmError(line, "unknown mnemonic '" + mn + "'");

  switch (info->op) {
  case Mnemonic::Li:
    p.arity(2);
    return li(p.reg(0), p.imm(1, -32768, 32767));
  case Mnemonic::Lui:
    p.arity(2);
    return lui(p.reg(0), p.imm(1, 0, 65535));
  case Mnemonic::Ori:
    p.arity(3);
    return ori(p.reg(0), p.reg(1), p.imm(2, 0, 65535));
  case Mnemonic::Addiu:
    p.arity(3);
    return addiu(p.reg(0), p.reg(1), p.imm(2, -32768, 32767));
  case Mnemonic::Lw:
  case Mnemonic::Sw:
    return p.memory(info->op);
  case Mnemonic::Sll:
  case Mnemonic::Srl:
    p.arity(3);
    return shift(info->op, p.reg(0), p.reg(1), p.imm(2, 0, 31));
  case Mnemonic::Sllv:
    p.arity(3);
    return sllv(p.reg(0), p.reg(1), p.reg(2));
  case Mnemonic::Srlv:
    p.arity(3);
    return srlv(p.reg(0), p.reg(1), p.reg(2));
  case Mnemonic::Beq:
    p.arity(3);
    return beq(p.reg(0), p.reg(1), p.name(2));
  case Mnemonic::Bne:
    p.arity(3);
    return bne(p.reg(0), p.reg(1), p.name(2));
  case Mnemonic::J:
    p.arity(1);
    return j(p.name(0));
  case Mnemonic::Break:
    p.arity(0);
    return brk();
  default:
    p.arity(3);
    return rrr(info->op, p.reg(0), p.reg(1), p.reg(2));
  }
}

}  // namespace

MipsProgram parse_asm(std::string_view src) {
  MipsProgram prog;
  enum class Section { Data, Text } section = Section::Text;
  std::set<std::string> data_labels, text_labels;
  std::vector<std::pair<int, std::size_t>> refs;  // (line, text index) needing resolution

  std::istringstream in{std::string(src)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    if (line == ".data") {
      section = Section::Data;
      continue;
    }
    if (line == ".text") {
      section = Section::Text;
      continue;
    }
    if (line.rfind(".globl", 0) == 0) continue;

    if (section == Section::Data) {
      auto colon = line.find(':');
      if (colon == std::string::npos) throw AsmError(lineno, "expected 'label: .word value'");
      std::string name = trim(line.substr(0, colon));
      std::string rest = trim(line.substr(colon + 1));
      if (!is_label_name(name)) throw AsmError(lineno, "bad label '" + name + "'");
      if (rest.rfind(".word", 0) != 0) throw AsmError(lineno, "expected .word directive");
      std::string value = trim(rest.substr(5));
      std::int64_t v;
      try {
        std::size_t used = 0;
        v = std::stoll(value, &used, 0);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception &) {
        throw AsmError(lineno, "bad word value '" + value + "'");
      }
      if (v < INT32_MIN || v > static_cast<std::int64_t>(UINT32_MAX))
        throw AsmError(lineno, "word value out of range");
      if (!data_labels.insert(name).second || text_labels.count(name))
        throw AsmError(lineno, "duplicate label '" + name + "'");
      prog.data.push_back({name, static_cast<Word32>(v)});
      continue;
    }
    if (line.back() == ':') {
      std::string name = trim(line.substr(0, line.size() - 1));
      if (!is_label_name(name)) throw AsmError(lineno, "bad label '" + name + "'");
      if (!text_labels.insert(name).second || data_labels.count(name))
        throw AsmError(lineno, "duplicate label '" + name + "'");
      prog.text.push_back(label(name));
      continue;
    }
    auto sp = line.find_first_of(" \t");
    std::string mn = sp == std::string::npos ? line : line.substr(0, sp);
    std::string rest = sp == std::string::npos ? std::string() : line.substr(sp + 1);
    Instr i = parse_instruction(lineno, mn, rest);
    if (!i.label.empty()) refs.emplace_back(lineno, prog.text.size());
    prog.text.push_back(std::move(i));
  }

  for (auto [line, idx] : refs) {
    const Instr &i = prog.text[idx];
    bool is_mem = i.op == Mnemonic::Lw || i.op == Mnemonic::Sw;
    const auto &pool = is_mem ? data_labels : text_labels;
    if (!pool.count(i.label)) throw AsmError(line, "undefined label '" + i.label + "'");
  }
  return prog;
}

}  // namespace imp::mips
