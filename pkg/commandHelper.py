from commands.certificate import CertificateCommand
from commands.dispersioncheck import DispersionCheckCommand
from commands.dncheck import DnCheckCommand
from commands.framebounds import FrameBoundsCommand
from commands.latticecount import LatticeCountCommand
from commands.restprobe import RestProbeCommand
from commands.solve import SolveCommand
from commands.zcsdispersion import ZcsDispersionCommand

class CommandHelper:

    commands = []

    @staticmethod
    def get_all_commands():

        if len(CommandHelper.commands) > 0:
            return CommandHelper.commands

        CommandHelper._add_command(DispersionCheckCommand(), "dispersion-check")
        CommandHelper._add_command(SolveCommand(), "solve")
        CommandHelper._add_command(LatticeCountCommand(), "lattice-count")
        CommandHelper._add_command(FrameBoundsCommand(), "frame-bounds")
        CommandHelper._add_command(CertificateCommand(), "certificate")
        CommandHelper._add_command(DnCheckCommand(), "dn")
        CommandHelper._add_command(ZcsDispersionCommand(), "zcs-dispersion")
        CommandHelper._add_command(RestProbeCommand(), "rest-probe")

        return CommandHelper.commands

    @staticmethod
    def _add_command(command, name):
        command.name = name
        command.search_name = name.lower().strip()
        CommandHelper.commands.append(command)

    @staticmethod
    def get_command(name):
        name = name.lower().strip()

        for c in CommandHelper.get_all_commands():
            if c.search_name == name:
                return c

        return None
