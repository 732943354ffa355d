import { runFigure } from "./cli";

process.exit(runFigure("window", process.argv.slice(2)));
