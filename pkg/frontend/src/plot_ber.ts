import { runFigure } from "./cli";

process.exit(runFigure("ber", process.argv.slice(2)));
