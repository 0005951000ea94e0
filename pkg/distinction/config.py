#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
运行配置与计算环境

RunConfig 对应 JSON 配置文件中的各项参数；build_setting 根据配置构建
域塔、标量域、Weil 群以及各种特征枚举，并在任何工作线程启动之前预热缓存。
"""

import json
import logging
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from distinction.characters import (
    SmoothCharacter,
    default_unif_order,
    enumerate_characters,
    norm_residue_character,
    nu,
    nu_half,
    omega_EF,
    quadratic_characters,
    trivial,
)
from distinction.localfield import FieldSpec, FieldSpecError, LocalField, Tower
from distinction.scalars import (
    ComputationError,
    FiniteField,
    ell_prime_part,
    minimal_degree,
    q_mod_ell_class,
)
from distinction.weilrep import RelativeWeilGroup, biquadratic_weil_group, quadratic_weil_group

logger = logging.getLogger(__name__)

# 项目根目录，用于定位默认配置模板
PROJECT_ROOT = Path(__file__).parent.parent
CONFIG_TEMPLATE_PATH = PROJECT_ROOT / 'config.template.json'

OUTPUT_FORMATS = ("json", "tsv", "text")
NU_HALF_CONVENTIONS = ("even", "odd")


# --- 自定义异常 ---
class ConfigError(ComputationError):
    """配置文件缺失或格式错误"""
    pass


@dataclass
class RunConfig:
    """一次运行的全部参数，键名与 JSON 配置文件一致"""

    p: Optional[int] = None
    ell: Optional[int] = None
    f: int = 1
    base_char: str = "zero"
    ext: str = "unram"
    depth: Optional[int] = None
    max_unif_order: Optional[int] = None
    max_conductor: Optional[int] = None
    cusp_conductor: Optional[int] = None
    nu_half: str = "even"
    format: str = "text"
    out: Optional[str] = None
    workers: int = 4
    seed: int = 0
    log_file: Optional[str] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"未知的配置项: {', '.join(unknown)}")
        return cls(**data)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def merged(self, overrides: Dict[str, Any]) -> "RunConfig":
        """返回用非空的 overrides 覆盖后的新配置"""
        data = self.to_dict()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.from_dict(data)

    def field_spec(self) -> FieldSpec:
        if self.p is None or self.ell is None:
            raise FieldSpecError("配置中必须给出 p 和 ell")
        return FieldSpec(p=self.p, ell=self.ell, f=self.f, base_char=self.base_char,
                         ext=self.ext, depth=self.depth)

    def validate(self) -> "RunConfig":
        self.field_spec().validate()
        if self.nu_half not in NU_HALF_CONVENTIONS:
            raise ConfigError(f"nu_half 必须是 {NU_HALF_CONVENTIONS} 之一, 实际为 {self.nu_half!r}")
        if self.format not in OUTPUT_FORMATS:
            raise ConfigError(f"format 必须是 {OUTPUT_FORMATS} 之一, 实际为 {self.format!r}")
        if self.workers < 1:
            raise ConfigError("workers 至少为 1")
        if self.cusp_conductor is not None and self.cusp_conductor < 1:
            raise ConfigError("cusp_conductor 至少为 1")
        if self.max_unif_order is not None and self.max_unif_order < 1:
            raise ConfigError("max_unif_order 至少为 1")
        return self


def load_config(path: Union[str, Path]) -> RunConfig:
    """
    从 JSON 文件加载配置

    返回:
        RunConfig: 未经校验的配置对象
    """
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError:
        logger.error(f"配置文件未找到: {path}")
        raise ConfigError(f"配置文件未找到: {path}")
    except json.JSONDecodeError as e:
        logger.error(f"加载配置文件时出错: {e}")
        raise ConfigError(f"配置文件不是合法的 JSON: {path}: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"配置文件顶层必须是对象: {path}")
    data = {k: v for k, v in data.items() if not k.startswith("_")}
    return RunConfig.from_dict(data)


def parse_field_flag(text: str) -> Dict[str, Any]:
    """解析 --field p,f,ext,ell,depth；depth 可省略"""
    parts = [s.strip() for s in text.split(",")]
    if len(parts) not in (4, 5):
        raise ConfigError(f"--field 需要 p,f,ext,ell[,depth], 实际为 {text!r}")
    try:
        out = {"p": int(parts[0]), "f": int(parts[1]), "ext": parts[2], "ell": int(parts[3])}
        if len(parts) == 5 and parts[4]:
            out["depth"] = int(parts[4])
    except ValueError:
        raise ConfigError(f"--field 中的数值无法解析: {text!r}")
    return out


class Setting:
    """
    一个配置对应的全部计算对象：域塔、标量域 GF(ell^d)、W(E/F) 与
    （p 为奇数时）W(K/F)，以及特征枚举的上下界。
    """

    def __init__(self, config: RunConfig):
        config.validate()
        self.config = config
        self.spec = config.field_spec()
        self.ell = self.spec.ell
        self.convention = config.nu_half
        self.tower = Tower(self.spec)
        self.unif_order = config.max_unif_order or default_unif_order(self.tower, self.ell)
        self.regime_E = q_mod_ell_class(self.spec.q_E, self.ell)
        self.regime_F = q_mod_ell_class(self.spec.q_F, self.ell)
        self.scalars = FiniteField(self.ell, self.scalar_degree())
        self.wq: RelativeWeilGroup = quadratic_weil_group(self.tower, self.scalars)
        self.wk: Optional[RelativeWeilGroup] = None
        if self.tower.K is not None:
            self.wk = biquadratic_weil_group(self.tower, self.scalars)

    def __repr__(self) -> str:
        s = self.spec
        return f"Setting(p={s.p}, f={s.f}, ext={s.ext}, ell={s.ell}, depth={self.tower.depth})"

    # --- bounds ---

    def _bounds(self, name: str):
        """(一致化元阶上界, 导子上界)"""
        cfg = self.config
        if name == "E":
            return self.unif_order, cfg.max_conductor
        if name == "F":
            return 2 * self.unif_order, cfg.max_conductor
        if name == "K":
            return self.unif_order, cfg.cusp_conductor
        if name in ("K0", "K1"):
            return 2 * self.unif_order, cfg.cusp_conductor
        raise ConfigError(f"没有为 {name} 定义枚举范围")

    def scalar_degree(self) -> int:
        """
        使所有枚举特征的取值都能嵌入 GF(ell^d) 的最小 d

        需要覆盖各单位群指数、一致化元取值的阶以及 nu^(1/2) 的取值。
        """
        ell = self.ell
        orders = [ell_prime_part(L.unit_group().exponent, ell) for L in self.tower.fields.values()]
        m = ell_prime_part(self.unif_order, ell)
        exponent = math.lcm(*orders, m, 2 * m, 2 * (ell - 1))
        degree = minimal_degree(ell, exponent)
        logger.info(f"标量域次数选择: 指数 {exponent} -> d = {degree}")
        return degree

    # --- distinguished characters ---

    def field(self, name: str) -> LocalField:
        return self.tower.field(name)

    def trivial(self, name: str = "E") -> SmoothCharacter:
        return trivial(self.field(name))

    def nu(self, name: str = "E") -> SmoothCharacter:
        return nu(self.field(name), self.ell)

    def nu_half(self, name: str = "E", convention: Optional[str] = None) -> SmoothCharacter:
        return nu_half(self.tower, name, self.ell, convention or self.convention)

    @property
    def omega(self) -> SmoothCharacter:
        return omega_EF(self.tower)

    def omega_KE(self) -> SmoothCharacter:
        return norm_residue_character(self.tower, "E", "K")

    def quadratic(self, name: str = "E") -> List[SmoothCharacter]:
        return quadratic_characters(self.field(name))

    def characters(self, name: str = "E") -> List[SmoothCharacter]:
        unif, conductor = self._bounds(name)
        return enumerate_characters(self.field(name), self.ell, unif, conductor)

    def group_for(self, name: str) -> RelativeWeilGroup:
        """K 系列的域用 W(K/F)，其余用 W(E/F)"""
        if name.startswith("K"):
            if self.wk is None:
                self.tower.require_biquadratic()
            return self.wk
        return self.wq

    def warm(self) -> "Setting":
        """预先构建工作线程会读取的全部缓存"""
        names = ["F", "E"] + (["K", "K0", "K1"] if self.wk is not None else [])
        for name in names:
            self.characters(name)
            self.quadratic(name)
        self.omega
        for name in ("F", "E"):
            self.nu(name)
            for conv in NU_HALF_CONVENTIONS:
                self.nu_half(name, conv)
        if self.wk is not None:
            self.omega_KE()
        logger.info(f"{self} 缓存预热完成")
        return self


def build_setting(config: RunConfig) -> Setting:
    """根据配置构建并预热计算环境"""
    return Setting(config).warm()
