import click
from dotenv import load_dotenv

from app.configuration.config import settings
from app.routes import commands
from app.utils.logger import log


# Load environment variables
load_dotenv()


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option("1.0.0", prog_name="resonance-lab")
def cli() -> None:
    """
    Orbit structure, resonance and theorem suites for rowmotion, promotion,
    K-promotion and fully-packed-loop gyration. Reports go to standard
    output; errors go to standard error as JSON.
    """
    log.debug(f"resonance-lab starting ({settings.ENVIRONMENT}, state cap {settings.STATE_CAP})")


for command in commands:
    cli.add_command(command)


if __name__ == "__main__":
    cli()
