#include <map>

#include "imp/mips.hpp"

namespace imp::mips {

namespace {

constexpr std::string_view kVarPrefix = "var_";

std::map<std::string, Word32> data_addresses(const MipsProgram &prog) {
  std::map<std::string, Word32> out;
  for (std::size_t i = 0; i < prog.data.size(); ++i)
    out[prog.data[i].label] = kDataBase + static_cast<Word32>(4 * i);
  return out;
}

}  // namespace

MipsState initial_state(const MipsProgram &prog, const std::map<std::string, Word32> &init) {
  MipsState st;
  for (std::size_t i = 0; i < prog.data.size(); ++i) {
    const auto &d = prog.data[i];
    Word32 value = d.init;
    if (d.label.rfind(kVarPrefix, 0) == 0) {
      auto it = init.find(d.label.substr(kVarPrefix.size()));
      if (it != init.end()) value = it->second;
    }
    st.mem[kDataBase + static_cast<Word32>(4 * i)] = value;
  }
  st.regs[kSp] = kStackTop;
  st.pc = prog.text.size();
  for (std::size_t i = 0; i < prog.text.size(); ++i)
    if (prog.text[i].op == Mnemonic::Label && prog.text[i].label == "main") st.pc = i;
  return st;
}

std::optional<SimOutcome> run_machine(const MipsProgram &prog, MipsState &st,
                                      std::uint64_t budget) {
  const auto data = data_addresses(prog);
  std::map<std::string, std::size_t> text;
  for (std::size_t i = 0; i < prog.text.size(); ++i)
    if (prog.text[i].op == Mnemonic::Label) text[prog.text[i].label] = i;

  auto &R = st.regs;
  auto address = [&](const Instr &in, Word32 &addr) -> std::optional<SimOutcome> {
    if (!in.label.empty()) {
      auto it = data.find(in.label);
      if (it == data.end()) return Trap{"undefined data label '" + in.label + "'"};
      addr = it->second;
    } else {
      addr = R[in.rs] + static_cast<Word32>(in.imm);
    }
    if (addr % 4 != 0) return Trap{"unaligned word access at " + std::to_string(addr)};
    return std::nullopt;
  };
  auto jump = [&](const std::string &l) -> std::optional<SimOutcome> {
    auto it = text.find(l);
    if (it == text.end()) return Trap{"undefined text label '" + l + "'"};
    st.pc = it->second;
    return std::nullopt;
  };

  while (!st.halted) {
    if (st.pc >= prog.text.size()) return Trap{"pc escaped the text segment"};
    const Instr &in = prog.text[st.pc];
    if (in.op == Mnemonic::Label) {
      ++st.pc;
      continue;
    }
    if (budget == 0) return BudgetExhausted{};
    --budget;

    std::size_t next = st.pc + 1;
    switch (in.op) {
    case Mnemonic::Li:
      R[in.rt] = static_cast<Word32>(in.imm);
      break;
    case Mnemonic::Lui:
      R[in.rt] = static_cast<Word32>(in.imm) << 16;
      break;
    case Mnemonic::Ori:
      R[in.rt] = R[in.rs] | static_cast<Word32>(in.imm & 0xFFFF);
      break;
    case Mnemonic::Addiu:
      R[in.rt] = R[in.rs] + static_cast<Word32>(in.imm);
      break;
    case Mnemonic::Lw: {
      Word32 addr = 0;
      if (auto trap = address(in, addr)) return trap;
      auto it = st.mem.find(addr);
      R[in.rt] = it == st.mem.end() ? 0u : it->second;
      break;
    }
    case Mnemonic::Sw: {
      Word32 addr = 0;
      if (auto trap = address(in, addr)) return trap;
      st.mem[addr] = R[in.rt];
      break;
    }
    case Mnemonic::Addu: R[in.rd] = R[in.rs] + R[in.rt]; break;
    case Mnemonic::Subu: R[in.rd] = R[in.rs] - R[in.rt]; break;
    case Mnemonic::And: R[in.rd] = R[in.rs] & R[in.rt]; break;
    case Mnemonic::Or: R[in.rd] = R[in.rs] | R[in.rt]; break;
    case Mnemonic::Xor: R[in.rd] = R[in.rs] ^ R[in.rt]; break;
    case Mnemonic::Nor: R[in.rd] = ~(R[in.rs] | R[in.rt]); break;
    case Mnemonic::Sll: R[in.rd] = R[in.rt] << (in.imm & 31); break;
    case Mnemonic::Srl: R[in.rd] = R[in.rt] >> (in.imm & 31); break;
    case Mnemonic::Sllv: R[in.rd] = R[in.rt] << (R[in.rs] & 31u); break;
    case Mnemonic::Srlv: R[in.rd] = R[in.rt] >> (R[in.rs] & 31u); break;
    case Mnemonic::Slt: R[in.rd] = as_signed(R[in.rs]) < as_signed(R[in.rt]) ? 1u : 0u; break;
    case Mnemonic::Sltu: R[in.rd] = R[in.rs] < R[in.rt] ? 1u : 0u; break;
    case Mnemonic::Beq:
    case Mnemonic::Bne:
      if ((R[in.rs] == R[in.rt]) == (in.op == Mnemonic::Beq)) {
        if (auto trap = jump(in.label)) return trap;
        next = st.pc;
      }
      break;
    case Mnemonic::J:
      if (auto trap = jump(in.label)) return trap;
      next = st.pc;
      break;
    case Mnemonic::Break:
      st.halted = true;
      next = st.pc;
      break;
    case Mnemonic::Label:
      break;
    }
    R[kZero] = 0;
    st.pc = next;
  }
  return std::nullopt;
}

SimOutcome simulate(const MipsProgram &prog, const std::map<std::string, Word32> &init,
                    std::uint64_t budget) {
  MipsState st = initial_state(prog, init);
  if (st.pc >= prog.text.size()) return Trap{"no 'main' label"};
  if (auto stop = run_machine(prog, st, budget)) return *stop;

  Halted h;
  for (std::size_t i = 0; i < prog.data.size(); ++i) {
    const auto &l = prog.data[i].label;
    if (l.rfind(kVarPrefix, 0) != 0) continue;
    h.vars[l.substr(kVarPrefix.size())] = st.mem[kDataBase + static_cast<Word32>(4 * i)];
  }
  return h;
}

}  // namespace imp::mips
