from ._logger import logger, set_logger
