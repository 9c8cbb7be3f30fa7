import os
import logging
import configparser
import traceback
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

log = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = "config/config.ini"
DEFAULT_ERRATA_PATH = "config/errata.ini"
DEFAULT_REFERENCES_PATH = "config/referencias.ini"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXPECTED_MATCH = "expected-match"
DOCUMENTED_ERRATUM = "documented-erratum"
STATUSES = (EXPECTED_MATCH, DOCUMENTED_ERRATUM)


@dataclass(frozen=True)
class Settings:
    """Configuração de execução lida de config/config.ini."""
    order: int = 16
    horizon_f_g: int = 12
    horizon_h_phi: int = 10
    cross_check_bound: int = 9
    max_workers: int = 4
    report_dir: str = "reports"
    errata_path: str = DEFAULT_ERRATA_PATH
    references_path: str = DEFAULT_REFERENCES_PATH
    log_level: str = "INFO"
    log_file: str = "logs/padroes132.log"

    def horizon_for(self, family):
        """Horizonte do oráculo para a família (F/G/MIXED ou H/PHI)."""
        return self.horizon_h_phi if family in ("H", "PHI") else self.horizon_f_g


def load_settings(config_path=None):
    """
    Carrega a configuração de execução.

    A ordem de precedência é: variáveis de ambiente (.env incluído),
    arquivo de configuração e, por fim, os valores padrão de Settings.

    Args:
        config_path (str, optional): Caminho do arquivo .ini. Se None, usa
            PADROES132_CONFIG ou config/config.ini.

    Returns:
        Settings: Configuração carregada
    """
    if Path(".env").exists():
        load_dotenv(".env")
        log.debug("Arquivo .env carregado")

    config_path = config_path or os.environ.get("PADROES132_CONFIG", DEFAULT_CONFIG_PATH)
    defaults = Settings()
    values = {}

    config = configparser.ConfigParser()
    if not os.path.exists(config_path):
        log.warning(f"Arquivo de configuração não encontrado em: {config_path}. Usando padrões.")
    else:
        try:
            config.read(config_path, encoding="utf-8")
            values = {
                "order": config.getint("SERIES", "order", fallback=defaults.order),
                "horizon_f_g": config.getint("ENUMERATION", "horizon_f_g", fallback=defaults.horizon_f_g),
                "horizon_h_phi": config.getint("ENUMERATION", "horizon_h_phi", fallback=defaults.horizon_h_phi),
                "cross_check_bound": config.getint("ENUMERATION", "cross_check_bound",
                                                   fallback=defaults.cross_check_bound),
                "max_workers": config.getint("VERIFY", "max_workers", fallback=defaults.max_workers),
                "report_dir": config.get("VERIFY", "report_dir", fallback=defaults.report_dir),
                "errata_path": config.get("VERIFY", "errata_path", fallback=defaults.errata_path),
                "references_path": config.get("CATALOG", "references_path", fallback=defaults.references_path),
                "log_level": config.get("LOGGING", "level", fallback=defaults.log_level),
                "log_file": config.get("LOGGING", "file", fallback=defaults.log_file),
            }
        except (configparser.Error, ValueError) as e:
            log.error(f"Erro ao ler configuração {config_path}: {e}. Usando padrões.")
            log.debug(traceback.format_exc())
            values = {}

    # Sobrescritas por ambiente
    if os.environ.get("PADROES132_LOG_LEVEL"):
        values["log_level"] = os.environ["PADROES132_LOG_LEVEL"]
    if os.environ.get("PADROES132_MAX_WORKERS"):
        try:
            values["max_workers"] = int(os.environ["PADROES132_MAX_WORKERS"])
        except ValueError:
            log.warning("PADROES132_MAX_WORKERS inválido, ignorado")

    return Settings(**{**defaults.__dict__, **values})


def load_errata(errata_path=DEFAULT_ERRATA_PATH):
    """
    Lê o livro de errata: status esperado por entrada do catálogo.

    Cada seção é um id de entrada (ex: "F.chain") ou um id com padrão
    específico separado por ':' (ex: "G.contain1:21-3"), com a chave
    `status` valendo expected-match ou documented-erratum.

    Args:
        errata_path (str): Caminho do arquivo de errata

    Returns:
        dict: {chave da seção: status}
    """
    ledger = {}
    if not os.path.exists(errata_path):
        log.warning(f"Livro de errata não encontrado em: {errata_path}")
        return ledger

    parser = configparser.ConfigParser()
    parser.read(errata_path, encoding="utf-8")
    for section in parser.sections():
        status = parser.get(section, "status", fallback=EXPECTED_MATCH).strip()
        if status not in STATUSES:
            log.error(f"Status inválido '{status}' para {section} no livro de errata; assumindo {EXPECTED_MATCH}")
            status = EXPECTED_MATCH
        ledger[section] = status
    log.debug(f"Livro de errata carregado com {len(ledger)} entradas")
    return ledger


def load_references(references_path=DEFAULT_REFERENCES_PATH):
    """
    Lê a origem bibliográfica de cada entrada do catálogo.

    Cada seção é um id de entrada com a chave `referencia`.

    Args:
        references_path (str): Caminho do arquivo de referências

    Returns:
        dict: {id da entrada: referência}
    """
    if not os.path.exists(references_path):
        log.warning(f"Arquivo de referências não encontrado em: {references_path}")
        return {}

    parser = configparser.ConfigParser()
    parser.read(references_path, encoding="utf-8")
    references = {section: parser.get(section, "referencia", fallback="").strip() for section in parser.sections()}
    log.debug(f"Referências carregadas para {len(references)} entradas")
    return references


_logging_configured = False


def configurar_logging(level="INFO", log_file="logs/padroes132.log"):
    """
    Configura os handlers de console e arquivo uma única vez por processo.

    Args:
        level (str): Nível de log (DEBUG, INFO, ...)
        log_file (str): Arquivo de log; None desativa o handler de arquivo
    """
    global _logging_configured
    root = logging.getLogger("padroes132")
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))
    if _logging_configured:
        return

    formatter = logging.Formatter(LOG_FORMAT)
    ch = logging.StreamHandler()
    ch.setFormatter(formatter)
    root.addHandler(ch)

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        fh = logging.FileHandler(log_file, encoding="utf-8")
        fh.setFormatter(formatter)
        root.addHandler(fh)

    _logging_configured = True
