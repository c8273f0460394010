#include "vendsim/cli.hpp"

#include "vendsim/analysis.hpp"
#include "vendsim/billing.hpp"
#include "vendsim/controller.hpp"
#include "vendsim/errors.hpp"
#include "vendsim/simulate.hpp"
#include "vendsim/waveform.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace vendsim::cli {

namespace {

using vending::ControllerConfig;

ControllerConfig resolve_config(const std::string& flag) {
    if (!flag.empty())
        return vending::load_config(flag);
    if (const char* env = std::getenv("VENDSIM_CONFIG"); env && *env)
        return vending::load_config(env);
    return {};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    out << contents;
    out.close();
    if (!out)
        throw IoError("cannot write " + path);
}

struct RunOptions {
    std::string stimulus;
    std::string vcd;
    std::string bill;
    std::string config;
    std::string vcd_date;
};

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    ControllerConfig config;
    MachineDefinition machine = [&] {
        config = resolve_config(opt.config);
        return vending::build_controller(config.catalog, config.capacity);
    }();

    const std::string text = read_file(opt.stimulus);
    StimulusProgram program;
    try {
        program = parse_stimulus(text, machine);
    } catch (const ParseError& e) {
        err << opt.stimulus << ":" << e.what() << '\n';
        return kUsageOrInputError;
    }

    const RunResult result = run(machine, program);

    if (!opt.vcd.empty()) {
        auto doc = vcd::trace_to_vcd(result.trace, machine);
        if (!opt.vcd_date.empty())
            doc.date = opt.vcd_date;
        write_file(opt.vcd, vcd::to_string(doc));
    }
    const auto bill = billing::render_bill(billing::ledger_from_trace(result.trace, config.catalog));
    if (!opt.bill.empty())
        write_file(opt.bill, billing::to_json(bill));

    out << "ran " << program.length << " cycles, final state "
        << machine.state_name(result.trace.back().state) << '\n';
    out << billing::to_text(bill);
    for (const auto& f : result.failures)
        out << "FAIL " << describe(f) << '\n';
    out << program.expectations.size() << " expectations, " << result.failures.size()
        << " failed\n";
    return result.passed() ? kOk : kExpectationFailed;
}

class Repl {
public:
    Repl(ControllerConfig config, std::ostream& out)
        : config_(std::move(config)),
          machine_(vending::build_controller(config_.catalog, config_.capacity)),
          layout_(config_.catalog.size()), kernel_(start(machine_, false)),
          ledger_(config_.catalog), out_(out) {}

    // Returns false on quit.
    bool execute(const std::string& line) {
        std::istringstream words(line);
        std::string cmd;
        if (!(words >> cmd))
            return true;
        std::string arg;
        words >> arg;

        if (cmd == "quit" || cmd == "exit")
            return false;
        if (cmd == "state") {
            out_ << name(kernel_.current.state) << '\n';
        } else if (cmd == "regs") {
            print_registers();
        } else if (cmd == "bill") {
            out_ << billing::to_text(billing::render_bill(ledger_));
        } else if (cmd == "tick") {
            unsigned long n = 1;
            if (!arg.empty() && !parse_count(arg, n))
                return true;
            for (unsigned long i = 0; i < n; ++i)
                clock(idle());
        } else if (cmd == "select") {
            auto p = config_.catalog.find(arg);
            if (!p) {
                out_ << "unknown product '" << arg << "'\n";
                return true;
            }
            pulse(layout_.select(*p));
        } else if (cmd == "insert") {
            if (arg == "10")
                pulse(layout_.rs_10);
            else if (arg == "20")
                pulse(layout_.rs_20);
            else
                out_ << "only 10 and 20 notes are accepted\n";
        } else if (cmd == "cancel") {
            pulse(layout_.cancel);
        } else if (cmd == "service") {
            pulse(layout_.serviced);
        } else if (cmd == "reset") {
            pulse(layout_.reset);
        } else {
            out_ << "unknown command '" << cmd << "'\n";
        }
        return true;
    }

private:
    std::vector<Value> idle() const { return machine_.zero_inputs(); }

    const std::string& name(StateId s) const { return machine_.state_name(s); }

    bool parse_count(const std::string& text, unsigned long& n) {
        try {
            std::size_t used = 0;
            n = std::stoul(text, &used);
            if (used == text.size() && n <= 10000)
                return true;
        } catch (const std::exception&) {
        }
        out_ << "bad cycle count '" << text << "'\n";
        return false;
    }

    // Drive one port for a single cycle, then idle until the controller is back
    // in a state that waits for the user.
    void pulse(std::size_t port) {
        auto inputs = idle();
        inputs[port] = 1;
        clock(inputs);
        for (int guard = 0; guard < 8 && transient(); ++guard)
            clock(idle());
    }

    bool transient() const {
        using vending::Phase;
        const auto phase = vending::decode_state(kernel_.current.state, layout_.products).phase;
        return phase != Phase::initialize && phase != Phase::waiting && phase != Phase::service;
    }

    void clock(const std::vector<Value>& inputs) {
        const StateId before = kernel_.current.state;
        const std::uint64_t cycle = kernel_.cycle;
        const auto outputs = vending::decode_outputs(step(machine_, kernel_, inputs));
        out_ << "[" << cycle << "] " << name(before) << " -> " << name(kernel_.current.state)
             << "  product=" << outputs.product << " change=" << outputs.change
             << " return=" << outputs.return_out << " money=" << outputs.money
             << " service_request=" << outputs.service_request << '\n';
        const auto state = vending::decode_state(before, layout_.products);
        if (outputs.product && state.phase == vending::Phase::vend) {
            ledger_.record_dispense(state.product);
            out_ << "dispensed " << config_.catalog[state.product].name << ", change "
                 << outputs.change << '\n';
        }
        if (outputs.return_out != 0)
            out_ << "returned " << outputs.return_out << '\n';
        if (outputs.service_request)
            out_ << "service requested\n";
    }

    void print_registers() {
        const auto regs = vending::decode_registers(kernel_.current.registers, layout_.products,
                                                    config_.capacity);
        out_ << "money_count=" << regs.money_count << " money=" << regs.money;
        for (std::size_t p = 0; p < layout_.products; ++p)
            out_ << " " << config_.catalog[p].name << "=" << regs.inventory.counts[p];
        out_ << '\n';
    }

    ControllerConfig config_;
    MachineDefinition machine_;
    vending::ControllerLayout layout_;
    KernelState kernel_;
    billing::BillLedger ledger_;
    std::ostream& out_;
};

int cmd_repl(const std::string& config_path, std::istream& in, std::ostream& out) {
    Repl repl(resolve_config(config_path), out);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream commands(line);
        std::string command;
        while (std::getline(commands, command, ';'))
            if (!repl.execute(command))
                return kOk;
    }
    return kOk;
}

int cmd_analyze(const std::string& config_path, const std::string& dot, bool report,
                std::ostream& out) {
    const auto config = resolve_config(config_path);
    const auto machine = vending::build_controller(config.catalog, config.capacity);
    if (!dot.empty()) {
        if (dot == "-")
            out << analysis::to_dot(machine);
        else
            write_file(dot, analysis::to_dot(machine));
    }
    if (report || dot.empty())
        out << analysis::to_json(analysis::resource_report(machine));
    return kOk;
}

} // namespace

int main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
         std::ostream& err) {
    CLI::App app{"Cycle-accurate vending machine controller simulator", "vendsim"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "Simulate a stimulus script");
    run->add_option("--stimulus", run_opt.stimulus, "Stimulus (.stim) file")->required();
    run->add_option("--vcd", run_opt.vcd, "Write a VCD waveform");
    run->add_option("--bill", run_opt.bill, "Write the session bill as JSON");
    run->add_option("--config", run_opt.config, "Controller config file");
    run->add_option("--vcd-date", run_opt.vcd_date, "Real $date for the VCD header");

    std::string repl_config;
    auto* repl = app.add_subcommand("repl", "Step the controller interactively");
    repl->add_option("--config", repl_config, "Controller config file");

    std::string analyze_config, dot;
    bool report = false;
    auto* analyze = app.add_subcommand("analyze", "Export the state graph and resource report");
    analyze->add_option("--config", analyze_config, "Controller config file");
    analyze->add_option("--dot", dot, "Write Graphviz dot ('-' for stdout)");
    analyze->add_flag("--report", report, "Print the resource report");

    std::vector<std::string> argv_storage{"vendsim"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageOrInputError;
    }

    try {
        if (*run)
            return cmd_run(run_opt, out, err);
        if (*repl)
            return cmd_repl(repl_config, in, out);
        return cmd_analyze(analyze_config, dot, report, out);
    } catch (const Error& e) {
        err << "vendsim: " << e.what() << '\n';
        return kUsageOrInputError;
    }
}

} // namespace vendsim::cli
