import logging
import threading
from typing import Optional
from requests import post as requests_post
from config import (LOG_SERVER_HOST, LOG_SERVER_PORT,
                    LOG_TO_SERVER, LOGGER_NAME, STATUS_CODES)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_TYPES = ["debug", "info", "warning", "error", "critical"]


class Logger:
    def __init__(self, console_level: int, log_file: Optional[str] = None, file_level: int = logging.DEBUG):
        # Create a logger object
        self.logger = logging.getLogger(name=LOGGER_NAME)
        self.logger.setLevel(logging.DEBUG)

        # Create formatter objects and set the format of the log messages
        formatter = logging.Formatter(LOG_FORMAT)

        # Create a console handler
        console_handler = logging.StreamHandler()
        console_handler.setLevel(console_level)
        console_handler.setFormatter(formatter)
        self.logger.addHandler(console_handler)

        # Create a file handler (only the log server writes a file)
        if log_file is not None:
            file_handler = logging.FileHandler(log_file)
            file_handler.setLevel(file_level)
            file_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)

    def log(self, log_type: str, message: str, origin: str = "unknown") -> None:
        """
        Log a message with the specified type, message and origin
        """
        log_message = f"[{origin}] {message}"

        log_method = getattr(self.logger, log_type)
        log_method(log_message)

    def close(self) -> None:
        for handler in self.logger.handlers[:]:
            handler.close()
            self.logger.removeHandler(handler)


def log(type: str, message: str, origin_name: str) -> None:
    """
    Log a message locally and, when enabled, asynchronously ship it to the log server via its API.

    params:
        type - The type of the log message (debug, info, warning, error, critical)
        message - The message to log
        origin_name - The component emitting the message

    returns:
        None
    """
    if type not in LOG_TYPES:
        type = "info"
    getattr(logging.getLogger(LOGGER_NAME), type)(f"[{origin_name}] {message}")

    if not LOG_TO_SERVER:
        return

    def send_log():
        try:
            log_data = {
                'type': type,
                'message': message,
                'origin': origin_name,
            }
            response = requests_post(f"http://{LOG_SERVER_HOST}:{LOG_SERVER_PORT}/log", json=log_data, timeout=5)
            if response.status_code != STATUS_CODES["ok"]:
                print(f"Failed to log message: {response.status_code} - {response.text}")
        except Exception as ex:
            print(f"Failed to send log: {ex}")

    threading.Thread(target=send_log, daemon=True).start()
