#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
命令行入口

子命令:
    distinguish     对单个表示给出区分性判定
    sweep           对全部可枚举表示运行 Prasad 对应检验
    tables          输出各类区分性表格
    counterexample  输出经典 Prasad 陈述的反例

表示描述语法:
    PS(chi1=REF,chi2=REF) | St(chi=REF) | Sp(chi=REF) | Cusp(K=K,theta=REF)
    I(chi=REF[,constituent=generic|trivial])      (SL2(E) 主序列, 配合 --sl2)
特征引用 REF:
    triv | omega | nu | nu_half | unram(k/m) | quad(i) | char(i) | {JSON}
    多个引用可用 * 相乘, 例如 quad(1)*nu_half
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from distinction import gl2, prasad, sl2, tables
from distinction.characters import CharacterFormatError, SmoothCharacter, extend_to, from_json
from distinction.config import (
    CONFIG_TEMPLATE_PATH,
    NU_HALF_CONVENTIONS,
    OUTPUT_FORMATS,
    ConfigError,
    RunConfig,
    Setting,
    build_setting,
    load_config,
    parse_field_flag,
)
from distinction.localfield import FieldSpecError
from distinction.scalars import ComputationError, RootOfUnity

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(threadName)s - %(levelname)s - %(message)s'

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_BAD_SPEC = 2
EXIT_IO = 3


# --- 自定义异常 ---
class RepSpecError(ComputationError):
    """表示描述无法解析，column 为出错位置（从 1 开始）"""

    def __init__(self, message: str, text: str = "", column: int = 1):
        self.message = message
        self.text = text
        self.column = column
        super().__init__(f"第 {column} 列: {message}")

    def diagnostic(self) -> str:
        return f"表示描述错误 (第 {self.column} 列): {self.message}\n  {self.text}\n  {' ' * (self.column - 1)}^"


def configure_logging(log_file: Optional[str] = None, level: int = logging.INFO) -> None:
    """为根日志器安装处理器；重复调用时先移除旧的处理器"""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_distinction", False):
            root.removeHandler(handler)
            handler.close()
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))
    for handler in handlers:
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._distinction = True
        root.addHandler(handler)
    root.setLevel(level)


# --- 表示描述解析 ---

# 构造名 -> (参数名 -> 取值类型)，类型为特征所在的域或 "word"
REP_KINDS: Dict[str, Dict[str, str]] = {
    "PS": {"chi1": "E", "chi2": "E"},
    "St": {"chi": "E"},
    "Sp": {"chi": "E"},
    "Cusp": {"K": "word", "theta": "K"},
    "I": {"chi": "E", "constituent": "word"},
}
REQUIRED = {"PS": ("chi1", "chi2"), "St": ("chi",), "Sp": ("chi",), "Cusp": ("theta",), "I": ("chi",)}


class RepSpecParser:
    """递归下降解析器，出错时报告列号"""

    def __init__(self, text: str, setting: Setting):
        self.text = text
        self.setting = setting
        self.pos = 0

    def error(self, message: str, pos: Optional[int] = None) -> RepSpecError:
        return RepSpecError(message, self.text, (self.pos if pos is None else pos) + 1)

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expect(self, ch: str) -> None:
        if self._peek() != ch:
            found = self._peek() or "输入结束"
            raise self.error(f"期望 {ch!r}, 实际为 {found!r}")
        self.pos += 1

    def _word(self) -> str:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        if start == self.pos:
            raise self.error("期望一个名称")
        return self.text[start:self.pos]

    def _until_close(self) -> str:
        start = self.pos
        end = self.text.find(")", start)
        if end < 0:
            raise self.error("括号未闭合")
        self.pos = end + 1
        return self.text[start:end].strip()

    def _json(self) -> Dict:
        start = self.pos
        depth, in_string = 0, False
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if in_string:
                if ch == "\\":
                    self.pos += 1
                elif ch == '"':
                    in_string = False
            elif ch == '"':
                in_string = True
            elif ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    self.pos += 1
                    try:
                        return json.loads(self.text[start:self.pos])
                    except json.JSONDecodeError as e:
                        raise self.error(f"内联 JSON 无法解析: {e.msg}", start + e.pos)
            self.pos += 1
        raise self.error("内联 JSON 的花括号未闭合", start)

    def _index(self, items: List[SmoothCharacter], start: int) -> SmoothCharacter:
        inner = self._until_close()
        try:
            idx = int(inner)
            if idx < 0:
                raise IndexError(idx)
            return items[idx]
        except (ValueError, IndexError):
            raise self.error(f"下标 {inner!r} 不在 0..{len(items) - 1} 之内", start)

    def _atom(self, domain: str) -> SmoothCharacter:
        setting = self.setting
        if self._peek() == "{":
            start = self.pos
            try:
                chi = from_json(setting.tower, self._json())
            except CharacterFormatError as e:
                raise self.error(str(e), start)
            if chi.domain != domain:
                raise self.error(f"需要 {domain} 上的特征, 实际为 {chi.domain}", start)
            return chi
        start = self.pos
        name = self._word()
        if self._peek() == "(":
            self.pos += 1
            if name == "unram":
                return self._unramified(domain, start)
            if name == "quad":
                return self._index(setting.quadratic(domain), start)
            if name == "char":
                return self._index(setting.characters(domain), start)
            raise self.error(f"未知的特征构造 {name}(...)", start)
        if name == "triv":
            return setting.trivial(domain)
        if name == "nu":
            return setting.nu(domain)
        if name == "nu_half":
            if domain not in ("E", "F"):
                raise self.error("nu_half 只在 E 和 F 上定义", start)
            return setting.nu_half(domain)
        if name == "omega":
            if domain == "F":
                return setting.omega
            if domain != "E":
                raise self.error("omega 只在 F 上定义, 或取其到 E 的延拓", start)
            extensions = extend_to(setting.tower, setting.omega, setting.characters("E"))
            if not extensions:
                raise self.error("当前枚举范围内没有 omega 到 E 的延拓", start)
            return extensions[0]
        raise self.error(f"未知的特征名 {name}", start)

    def _unramified(self, domain: str, start: int) -> SmoothCharacter:
        inner = self._until_close()
        try:
            value = RootOfUnity.parse(inner)
        except ValueError:
            raise self.error(f"unram 需要 k/m 形式的参数, 实际为 {inner!r}", start)
        if value.order % self.setting.ell == 0:
            raise self.error(f"unram({inner}) 的阶被 ell 整除", start)
        base = self.setting.trivial(domain)
        return SmoothCharacter(domain, value, base.unit_values, base.field)

    def character(self, domain: str) -> SmoothCharacter:
        chi = self._atom(domain)
        while self._peek() == "*":
            self.pos += 1
            chi = chi * self._atom(domain)
        return chi

    def parse(self):
        self._skip()
        kind_pos = self.pos
        kind = self._word()
        if kind not in REP_KINDS:
            raise self.error(f"未知的表示类型 {kind}, 可选: {', '.join(REP_KINDS)}", kind_pos)
        params = REP_KINDS[kind]
        self._expect("(")
        args: Dict[str, Any] = {}
        while self._peek() != ")":
            if args:
                self._expect(",")
            key_pos = self.pos
            key = self._word()
            if key not in params:
                raise self.error(f"{kind} 没有参数 {key}", key_pos)
            if key in args:
                raise self.error(f"参数 {key} 重复", key_pos)
            self._expect("=")
            args[key] = self._word() if params[key] == "word" else self.character(params[key])
        self._expect(")")
        if self._peek():
            raise self.error("表示描述之后有多余的字符")
        missing = [k for k in REQUIRED[kind] if k not in args]
        if missing:
            raise self.error(f"{kind} 缺少参数 {', '.join(missing)}", kind_pos)
        return self._build(kind, args, kind_pos)

    def _build(self, kind: str, args: Dict[str, Any], pos: int):
        if kind == "PS":
            return gl2.PrincipalSeries(args["chi1"], args["chi2"])
        if kind == "St":
            return gl2.Steinberg(args["chi"])
        if kind == "Sp":
            return gl2.Special(args["chi"])
        if kind == "Cusp":
            if args.get("K", "K") != "K":
                raise self.error("当前域塔中只有一个二次扩张 K", pos)
            return gl2.DihedralSupercuspidal(args["theta"])
        constituent = args.get("constituent", "generic")
        if constituent not in ("generic", "trivial"):
            raise self.error(f"constituent 必须是 generic 或 trivial, 实际为 {constituent}", pos)
        return sl2.SL2PrincipalSeries(args["chi"], constituent)


def parse_rep_spec(text: str, setting: Setting):
    """把表示描述解析为 GL2Rep 或 SL2PrincipalSeries"""
    return RepSpecParser(text, setting).parse()


def parse_character(text: str, setting: Setting, domain: str = "F") -> SmoothCharacter:
    parser = RepSpecParser(text, setting)
    chi = parser.character(domain)
    if parser._peek():
        raise parser.error("特征引用之后有多余的字符")
    return chi


# --- 输出 ---

def emit(text: str, out: Optional[str]) -> None:
    """写到 --out 指定的文件，未指定时写到标准输出"""
    if out:
        Path(out).write_text(text, encoding='utf-8')
        logger.info(f"结果已写入 {out}")
    else:
        sys.stdout.write(text)


def _check_out_dir(out: Optional[str]) -> None:
    if out and not Path(out).resolve().parent.is_dir():
        raise FileNotFoundError(f"输出目录不存在: {Path(out).parent}")


def _render_payload(payload: Dict, table: tables.Table, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
    return tables.render(table, fmt)


def _report_row(question: str, report) -> Tuple[str, ...]:
    mult = "unknown" if report.multiplicity is None else str(report.multiplicity)
    return (question, "yes" if report.distinguished else "no", mult, report.rationale)


# --- 子命令 ---

def cmd_distinguish(config: RunConfig, rep_spec: str, sl2_profile: bool = False,
                    chi_spec: Optional[str] = None) -> int:
    setting = build_setting(config)
    rep = parse_rep_spec(rep_spec, setting)
    payload: Dict[str, Any] = {"schema": prasad.SCHEMA_VERSION, "rep": rep.label()}
    rows: List[Tuple[str, ...]] = []
    if isinstance(rep, sl2.SL2PrincipalSeries):
        report = sl2.sl2_principal_distinguished(setting, rep)
        payload["sl2"] = report.to_json()
        rows.append(_report_row("SL2(F)", report))
    else:
        reports = [("GL2(F)", gl2.gl2F_distinction(setting, rep)),
                   ("GL2(F), omega", gl2.omega_distinction(setting, rep))]
        if chi_spec:
            chi_F = parse_character(chi_spec, setting, "F")
            reports.append((f"GL2(F), {chi_F.label()}", gl2.chi_distinction(setting, rep, chi_F)))
        for question, report in reports:
            payload[question] = report.to_json()
            rows.append(_report_row(question, report))
        if sl2_profile:
            if not isinstance(rep, gl2.DihedralSupercuspidal):
                logger.warning("--sl2 的限制长度只对二面体超尖表示计算")
            else:
                profile = sl2.restriction_profile(setting, rep)
                X = sl2.X_set(setting, rep)
                mult = sl2.sl2_supercuspidal_multiplicity(setting, rep, True) if X else 0
                payload["profile"] = profile.to_json()
                payload["X"] = [c.label() for c in X]
                payload["sl2_multiplicity"] = mult
                rows.append(("SL2(F)", "yes" if X else "no", str(mult),
                             f"lg={profile.lg} lg_plus={profile.lg_plus} |X|={len(X)}"))
    table = tables.Table(rep.label(), ("question", "distinguished", "multiplicity", "rationale"), tuple(rows))
    emit(_render_payload(payload, table, config.format), config.out)
    return EXIT_OK


def cmd_prasad_sweep(config: RunConfig, fault: Optional[int] = None) -> int:
    """退出码为 0 当且仅当没有不一致的行"""
    _check_out_dir(config.out)
    setting = build_setting(config)
    report = prasad.sweep(setting, config.workers, fault)
    if config.format == "json":
        text = json.dumps(report.to_json(), ensure_ascii=False, indent=2) + "\n"
    else:
        text = tables.render(tables.verdict_table(report), config.format)
    emit(text, config.out)
    if not report.ok:
        logger.error(f"Prasad 检验失败: {len(report.disagreements)} 行不一致, {len(report.failures)} 行出错")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_tables(config: RunConfig) -> int:
    _check_out_dir(config.out)
    setting = build_setting(config)
    emit(tables.render(tables.all_tables(setting), config.format), config.out)
    return EXIT_OK


def cmd_counterexample(config: RunConfig) -> int:
    _check_out_dir(config.out)
    setting = build_setting(config)
    witness = prasad.classical_counterexample(setting)
    payload = witness.to_json()
    rows = (
        ("rep", witness.rep.label()),
        ("naive parameter", witness.naive_parameter.label()),
        ("nilpotent lift to W_F", witness.naive_lift.label()),
        ("omega-distinguished", "yes" if witness.verdict.distinguished else "no"),
        ("modified lift exists", "yes" if witness.modified.rhs else "no"),
    )
    table = tables.Table("classical counterexample", ("item", "value"), rows)
    emit(_render_payload(payload, table, config.format), config.out)
    return EXIT_OK if witness.is_counterexample else EXIT_FAILURE


# --- 参数解析 ---

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None,
                        help=f"JSON 配置文件路径，默认使用 {CONFIG_TEMPLATE_PATH.name}")
    common.add_argument("--field", default=None,
                        help="覆盖域参数: p,f,ext,ell[,depth]\n例如: --field 3,1,unram,5")
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=None, help="输出格式，默认为 text")
    common.add_argument("--out", default=None, help="输出文件路径，默认写到标准输出")
    common.add_argument("--nu-half", dest="nu_half", choices=NU_HALF_CONVENTIONS, default=None,
                        help="nu^(1/2) 在一致化元上的取值约定，默认为 even")
    common.add_argument("-w", "--workers", type=int, default=None, help="扫描的并行线程数，默认为 4")
    common.add_argument("--log-file", dest="log_file", default=None, help="日志文件路径")

    parser = argparse.ArgumentParser(
        prog="modular-distinction",
        description="GL2/SL2/PGL2 的 ell-模区分性与 Weil-Deligne 提升的精确计算。",
        formatter_class=argparse.RawTextHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dist = sub.add_parser("distinguish", parents=[common], formatter_class=argparse.RawTextHelpFormatter,
                            help="对单个表示给出区分性判定")
    p_dist.add_argument("--rep", required=True,
                        help="表示描述，例如 'St(chi=triv)' 或 'PS(chi1=triv,chi2=triv)'")
    p_dist.add_argument("--sl2", action="store_true", help="同时给出 SL2(F) 的限制长度与重数")
    p_dist.add_argument("--chi", default=None, help="额外检验 (GL2(F), chi)-区分性，chi 为 F 上的特征引用")

    p_sweep = sub.add_parser("sweep", parents=[common], formatter_class=argparse.RawTextHelpFormatter,
                             help="对全部可枚举的 PGL2(E) 表示运行 Prasad 对应检验")
    p_sweep.add_argument("--fault", type=int, default=None, help=argparse.SUPPRESS)

    sub.add_parser("tables", parents=[common], formatter_class=argparse.RawTextHelpFormatter,
                   help="输出区分性表格")
    sub.add_parser("counterexample", parents=[common], formatter_class=argparse.RawTextHelpFormatter,
                   help="输出经典 Prasad 陈述的反例 (需要 ell | q_E + 1 且 E/F 非分歧)")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    base = load_config(args.config or CONFIG_TEMPLATE_PATH)
    overrides: Dict[str, Any] = {
        "format": args.format,
        "out": args.out,
        "nu_half": args.nu_half,
        "workers": args.workers,
        "log_file": args.log_file,
    }
    if args.field:
        overrides.update(parse_field_flag(args.field))
    return base.merged(overrides).validate()


COMMANDS: Dict[str, Callable[[RunConfig, argparse.Namespace], int]] = {
    "distinguish": lambda config, args: cmd_distinguish(config, args.rep, args.sl2, args.chi),
    "sweep": lambda config, args: cmd_prasad_sweep(config, args.fault),
    "tables": lambda config, args: cmd_tables(config),
    "counterexample": lambda config, args: cmd_counterexample(config),
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    命令行主入口

    退出码: 0 成功; 1 检验失败或计算错误; 2 表示描述错误; 3 配置或读写错误
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_file)

    try:
        config = build_config(args)
        if config.log_file and config.log_file != args.log_file:
            configure_logging(config.log_file)
        logger.info(f"===== {args.command}: p={config.p}, f={config.f}, ext={config.ext}, ell={config.ell} =====")
        code = COMMANDS[args.command](config, args)
    except RepSpecError as e:
        sys.stderr.write(e.diagnostic() + "\n")
        return EXIT_BAD_SPEC
    except (ConfigError, FieldSpecError) as e:
        logger.error(f"配置错误: {e}")
        return EXIT_IO
    except OSError as e:
        logger.error(f"读写错误: {e}")
        return EXIT_IO
    except ComputationError as e:
        logger.error(f"计算错误: {type(e).__name__}: {e}", exc_info=True)
        return EXIT_FAILURE

    logger.info(f"===== {args.command} 执行完毕, 退出码 {code} =====")
    return code


if __name__ == "__main__":
    sys.exit(main())
